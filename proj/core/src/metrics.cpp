#include "cardio/metrics.hpp"

#include "cardio/error.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

__extension__ typedef unsigned __int128 u128;

std::optional<Ratio> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return Ratio{num, den};
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size())
    throw Error("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                std::to_string(actual.size()) + " labels");
  if (predicted.empty()) throw Error("confusion: no predictions");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p = predicted[i], a = actual[i];
    if ((p != 0 && p != 1) || (a != 0 && a != 1))
      throw Error("confusion: labels must be 0 or 1 (index " + std::to_string(i) + ")");
    if (p == 1)
      ++(a == 1 ? cm.tp : cm.fp);
    else
      ++(a == 1 ? cm.fn : cm.tn);
  }
  return cm;
}

std::string Ratio::rounded(int places) const { return text::rounded_ratio(num, den, places); }

bool operator==(const Ratio& a, const Ratio& b) {
  return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
}

bool operator<(const Ratio& a, const Ratio& b) {
  return static_cast<u128>(a.num) * b.den < static_cast<u128>(b.num) * a.den;
}

std::optional<Ratio> accuracy(const ConfusionMatrix& cm) { return ratio(cm.tp + cm.tn, cm.total()); }
std::optional<Ratio> precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
std::optional<Ratio> recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }

std::optional<Ratio> f_measure(const ConfusionMatrix& cm) {
  if (!precision(cm) || !recall(cm) || cm.tp == 0) return std::nullopt;
  return Ratio{2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn};
}

MetricSet MetricSet::of(const ConfusionMatrix& cm) {
  return {cardio::accuracy(cm), cardio::precision(cm), cardio::recall(cm), cardio::f_measure(cm)};
}

std::string display(const std::optional<Ratio>& r, int places) {
  return r ? r->rounded(places) : "undefined";
}

}  // namespace cardio
