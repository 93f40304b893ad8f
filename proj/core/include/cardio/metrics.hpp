#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace cardio {

/// 2x2 confusion matrix with presence (class 1) as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws Error on a length mismatch, empty input or labels other than 0/1.
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual);

/// Exact non-negative rational num/den, den > 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Round-half-up to `places` decimals.
  std::string rounded(int places = 3) const;

  /// Exact comparisons by cross-multiplication.
  friend bool operator==(const Ratio& a, const Ratio& b);
  friend bool operator<(const Ratio& a, const Ratio& b);
};

std::optional<Ratio> accuracy(const ConfusionMatrix& cm);   // (TP+TN)/N
std::optional<Ratio> precision(const ConfusionMatrix& cm);  // TP/(TP+FP)
std::optional<Ratio> recall(const ConfusionMatrix& cm);     // TP/(TP+FN)
/// Harmonic mean of precision and recall, 2TP/(2TP+FP+FN); undefined when
/// either is undefined or both are zero.
std::optional<Ratio> f_measure(const ConfusionMatrix& cm);

struct MetricSet {
  std::optional<Ratio> accuracy;
  std::optional<Ratio> precision;
  std::optional<Ratio> recall;
  std::optional<Ratio> f_measure;

  static MetricSet of(const ConfusionMatrix& cm);
};

/// Rounded value, or "undefined".
std::string display(const std::optional<Ratio>& r, int places = 3);

}  // namespace cardio
