#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cardio/attributes.hpp"

namespace cardio {

/// One row of the cardiovascular dataset. Field order follows the dataset
/// description; `cardio` is the target (1 = disease present).
struct PatientRecord {
  int age = 0;  // days
  int height = 0;  // cm
  double weight = 0.0;  // kg
  int gender = 1;  // 1 or 2
  int ap_hi = 0;  // systolic, mmHg
  int ap_lo = 0;  // diastolic, mmHg
  int cholesterol = 1;  // 1..3
  int gluc = 1;  // 1..3
  int smoke = 0;
  int alco = 0;
  int active = 0;
  int cardio = 0;

  double value(Attribute a) const;
  void set(Attribute a, double v);
  FeatureVector features() const;

  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

/// Empty string when `r` satisfies the field-domain invariants, otherwise a
/// description of the first violation.
std::string validate(const PatientRecord& r);

struct Provenance {
  std::string source;
  std::size_t rows_loaded = 0;
  std::size_t duplicates_removed = 0;
};

struct Dataset {
  std::vector<PatientRecord> records;
  Provenance provenance;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  /// Count of records per class: {absence, presence}.
  std::array<std::size_t, 2> class_counts() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

enum class SplitMode { percentage_split, k_fold };

struct SplitSpec {
  SplitMode mode = SplitMode::percentage_split;
  double train_fraction = 0.60;
  std::size_t k = 10;
  std::uint64_t seed = 1;
  bool stratified = true;  // k_fold only; the percentage split is a plain shuffle

  void check() const;  // throws Error on invalid fields
};

/// Reads a delimited file with a header row. Columns are matched by header
/// name, so both the description order and the Kaggle order (`id;age;gender;
/// height;...`) load; an `id` column is discarded.
Dataset load_csv(const std::filesystem::path& path, char delimiter = ';');
Dataset read_csv(std::istream& in, char delimiter, const std::string& source = "<stream>");

/// Writes the twelve fields in description order, header included.
void write_csv(const Dataset& d, std::ostream& out, char delimiter = ';');
void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter = ';');

/// Keeps the first occurrence of each distinct 12-field tuple.
Dataset deduplicate(const Dataset& d);

/// Seeded shuffle, then the first floor(fraction * N) records train.
std::pair<Dataset, Dataset> percentage_split(const Dataset& d, const SplitSpec& spec,
                                             std::uint64_t seed);

/// Index-level form of percentage_split.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed);

/// k disjoint index sets covering [0, N). Stratified folding shuffles each
/// class separately, concatenates the classes and deals positions round-robin.
std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& d, std::size_t k,
                                                       std::uint64_t seed,
                                                       bool stratified = true);

/// 64-bit FNV-1a over the canonical CSV rendering; used to fingerprint inputs.
std::uint64_t fingerprint(const Dataset& d);

}  // namespace cardio
