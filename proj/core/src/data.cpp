#include "cardio/data.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "cardio/error.hpp"
#include "cardio/random.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

// Header order used by write_csv: the eleven predictors, then the target.
constexpr std::size_t kFieldCount = kAttributeCount + 1;

int& int_field(PatientRecord& r, Attribute a) {
  switch (a) {
    case Attribute::age: return r.age;
    case Attribute::height: return r.height;
    case Attribute::gender: return r.gender;
    case Attribute::ap_hi: return r.ap_hi;
    case Attribute::ap_lo: return r.ap_lo;
    case Attribute::cholesterol: return r.cholesterol;
    case Attribute::gluc: return r.gluc;
    case Attribute::smoke: return r.smoke;
    case Attribute::alco: return r.alco;
    case Attribute::active: return r.active;
    case Attribute::weight: break;
  }
  throw std::logic_error("weight is not an integer field");
}

struct RecordHash {
  std::size_t operator()(const PatientRecord& r) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t v) { h = splitmix64(h ^ v); };
    for (Attribute a : kAllAttributes) {
      double v = r.value(a);
      if (v == 0.0) v = 0.0;
      std::uint64_t bits;
      static_assert(sizeof bits == sizeof v);
      std::memcpy(&bits, &v, sizeof v);
      mix(bits);
    }
    mix(static_cast<std::uint64_t>(r.cardio));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

double PatientRecord::value(Attribute a) const {
  switch (a) {
    case Attribute::age: return age;
    case Attribute::height: return height;
    case Attribute::weight: return weight;
    case Attribute::gender: return gender;
    case Attribute::ap_hi: return ap_hi;
    case Attribute::ap_lo: return ap_lo;
    case Attribute::cholesterol: return cholesterol;
    case Attribute::gluc: return gluc;
    case Attribute::smoke: return smoke;
    case Attribute::alco: return alco;
    case Attribute::active: return active;
  }
  return 0.0;
}

void PatientRecord::set(Attribute a, double v) {
  if (a == Attribute::weight) {
    weight = v;
  } else {
    int_field(*this, a) = static_cast<int>(std::lround(v));
  }
}

FeatureVector PatientRecord::features() const {
  FeatureVector out{};
  for (Attribute a : kAllAttributes) out[index(a)] = value(a);
  return out;
}

std::string validate(const PatientRecord& r) {
  auto in = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
  if (r.age <= 0) return "age must be positive";
  if (r.height <= 0) return "height must be positive";
  if (!(r.weight > 0.0) || !std::isfinite(r.weight)) return "weight must be positive";
  if (!in(r.gender, 1, 2)) return "gender must be 1 or 2";
  if (!in(r.cholesterol, 1, 3)) return "cholesterol must be 1, 2 or 3";
  if (!in(r.gluc, 1, 3)) return "gluc must be 1, 2 or 3";
  if (!in(r.smoke, 0, 1)) return "smoke must be 0 or 1";
  if (!in(r.alco, 0, 1)) return "alco must be 0 or 1";
  if (!in(r.active, 0, 1)) return "active must be 0 or 1";
  if (!in(r.cardio, 0, 1)) return "cardio must be 0 or 1";
  return {};
}

std::array<std::size_t, 2> Dataset::class_counts() const {
  std::array<std::size_t, 2> counts{0, 0};
  for (const auto& r : records) ++counts[r.cardio == 1 ? 1 : 0];
  return counts;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.provenance = provenance;
  out.records.reserve(indices.size());
  for (auto i : indices) out.records.push_back(records.at(i));
  return out;
}

void SplitSpec::check() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("train_fraction must lie strictly between 0 and 1");
  if (k < 2) throw Error("fold count must be at least 2");
}

Dataset read_csv(std::istream& in, char delimiter, const std::string& source) {
  Dataset d;
  d.provenance.source = source;

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw LoadError(source, 1, 0, "missing header row");
  ++line_no;

  // Column -> field slot; slot kAttributeCount is the target, nullopt drops.
  std::vector<std::optional<std::size_t>> slots;
  std::array<bool, kFieldCount> seen{};
  for (auto raw : text::split(line, delimiter)) {
    auto col = text::trim(raw);
    if (!col.empty() && col.front() == '"' && col.back() == '"' && col.size() >= 2)
      col = col.substr(1, col.size() - 2);
    if (line_no == 1 && slots.empty() && col.size() >= 3 &&
        col.substr(0, 3) == "\xEF\xBB\xBF")
      col.remove_prefix(3);
    std::optional<std::size_t> slot;
    if (col == "id") {
      slot = std::nullopt;
    } else if (col == kTargetName) {
      slot = kAttributeCount;
    } else if (auto a = attribute_from_name(col)) {
      slot = index(*a);
    } else {
      throw LoadError(source, line_no, 0, "unknown column '" + std::string(col) + "'");
    }
    if (slot) {
      if (seen[*slot]) throw LoadError(source, line_no, 0, "duplicate column '" + std::string(col) + "'");
      seen[*slot] = true;
    }
    slots.push_back(slot);
  }
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (!seen[i]) {
      std::string missing = i == kAttributeCount ? std::string(kTargetName)
                                                 : std::string(name(kAllAttributes[i]));
      throw LoadError(source, line_no, 0, "header lacks column '" + missing + "'");
    }
  }
  const std::size_t id_columns = slots.size() - kFieldCount;
  if (id_columns > 1) throw LoadError(source, line_no, 0, "more than one id column");

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    ++row;
    auto fields = text::split(line, delimiter);
    if (fields.size() != slots.size()) {
      throw LoadError(source, line_no, row,
                      "expected " + std::to_string(slots.size()) + " fields, found " +
                          std::to_string(fields.size()));
    }
    PatientRecord r;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!slots[c]) continue;
      const std::size_t slot = *slots[c];
      const std::string column = slot == kAttributeCount
                                     ? std::string(kTargetName)
                                     : std::string(name(kAllAttributes[slot]));
      auto field = text::trim(fields[c]);
      if (field.empty()) throw LoadError(source, line_no, row, "missing value for " + column);
      auto v = text::parse_decimal(field);
      if (!v || !std::isfinite(*v))
        throw LoadError(source, line_no, row,
                        "non-numeric value '" + std::string(field) + "' for " + column);
      if (slot == kAttributeCount) {
        if (*v != std::floor(*v)) throw LoadError(source, line_no, row, "cardio must be an integer");
        r.cardio = static_cast<int>(*v);
      } else {
        Attribute a = kAllAttributes[slot];
        if (a != Attribute::weight && *v != std::floor(*v))
          throw LoadError(source, line_no, row, column + " must be an integer");
        r.set(a, *v);
      }
    }
    if (auto problem = validate(r); !problem.empty())
      throw LoadError(source, line_no, row, problem);
    d.records.push_back(r);
  }
  d.provenance.rows_loaded = d.records.size();
  return d;
}

Dataset load_csv(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, 0, "cannot open file");
  return read_csv(in, delimiter, path.string());
}

void write_csv(const Dataset& d, std::ostream& out, char delimiter) {
  for (Attribute a : kAllAttributes) out << name(a) << delimiter;
  out << kTargetName << '\n';
  for (const auto& r : d.records) {
    for (Attribute a : kAllAttributes) out << text::decimal(r.value(a)) << delimiter;
    out << r.cardio << '\n';
  }
}

void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(d, out, delimiter);
  if (!out) throw Error("write failed: " + path.string());
}

Dataset deduplicate(const Dataset& d) {
  Dataset out;
  out.provenance = d.provenance;
  out.records.reserve(d.records.size());
  std::unordered_set<PatientRecord, RecordHash> seen;
  seen.reserve(d.records.size() * 2);
  for (const auto& r : d.records) {
    if (seen.insert(r).second) out.records.push_back(r);
  }
  out.provenance.duplicates_removed += d.records.size() - out.records.size();
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed) {
  if (n < 2) throw Error("percentage split needs at least 2 records");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("train_fraction must lie strictly between 0 and 1");
  auto order = shuffled_indices(n, seed);
  auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> percentage_split(const Dataset& d, const SplitSpec& spec,
                                             std::uint64_t seed) {
  if (spec.mode != SplitMode::percentage_split)
    throw Error("percentage_split requires a percentage_split SplitSpec");
  spec.check();
  auto [train, test] = split_indices(d.size(), spec.train_fraction, seed);
  return {d.subset(train), d.subset(test)};
}

std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& d, std::size_t k,
                                                       std::uint64_t seed, bool stratified) {
  const std::size_t n = d.size();
  if (k < 2) throw Error("fold count must be at least 2");
  if (k > n) throw Error("fold count " + std::to_string(k) + " exceeds record count " +
                         std::to_string(n));

  std::vector<std::size_t> order;
  order.reserve(n);
  Rng rng(seed);
  if (stratified) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[d.records[i].cardio == 1 ? 1 : 0].push_back(i);
    for (std::size_t c = 0; c < 2; ++c) {
      if (!by_class[c].empty() && by_class[c].size() < k)
        throw Error("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                    " records, fewer than " + std::to_string(k) + " folds");
      shuffle(std::span<std::size_t>(by_class[c]), rng);
      order.insert(order.end(), by_class[c].begin(), by_class[c].end());
    }
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(order), rng);
  }

  std::vector<std::vector<std::size_t>> folds(k);
  for (auto& f : folds) f.reserve(n / k + 1);
  for (std::size_t p = 0; p < n; ++p) folds[p % k].push_back(order[p]);
  return folds;
}

std::uint64_t fingerprint(const Dataset& d) {
  std::ostringstream os;
  write_csv(d, os, ';');
  return text::fnv1a(os.str());
}

}  // namespace cardio
