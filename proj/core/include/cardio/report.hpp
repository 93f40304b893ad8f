#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cardio/evaluation.hpp"

namespace cardio {

/// Ordered key/value description of the run that produced an output
/// (input path and fingerprint, seed, hyperparameters, ...). Embedded in
/// every file the tool writes.
using RunInfo = std::vector<std::pair<std::string, std::string>>;

/// One report per file, "key: value" lines:
///
///   # cardio-onto evaluation report
///   method: decision_tree
///   protocol: folds10
///   records: 69976
///   seed: 1
///   hyperparameters: seed=1 tree.min_leaf=2 ...
///   input: 3f0c...                     (fingerprint, may be empty)
///   run.<key>: <value>                 (RunInfo, in order)
///   tp: / fp: / fn: / tn:              (pooled for cross-validation)
///   accuracy: 0.731 (51152/69976)      (derived; checked on read)
///   precision: / recall: / f_measure:  ("undefined" when undefined)
///   folds: 10
///   fold.1: tp fp fn tn                (one line per fold)
///   ontology.<stat>: n                 (ontology method only)
///   ontology.tree: tp fp fn tn
///   wall_seconds: 12.3
void write_report(const EvaluationReport& report, const RunInfo& run, std::ostream& out);
/// Parses write_report output. The RunInfo lines are returned in `run` if given.
/// Throws ParseError on malformed lines and Error if a metric line disagrees
/// with the stored matrix.
EvaluationReport read_report(std::istream& in, RunInfo* run = nullptr);

/// Report file name: report_<method>_<protocol>.txt
std::string report_file_name(Method m, Protocol p);

struct ComparisonRow {
  Method method = Method::decision_tree;
  std::optional<ConfusionMatrix> folds10;
  std::optional<ConfusionMatrix> split60;

  const std::optional<ConfusionMatrix>& at(Protocol p) const {
    return p == Protocol::folds10 ? folds10 : split60;
  }
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  RunInfo run;
};

/// One row per method, sorted ascending by Folds-10 accuracy (exact), then
/// Split-60% accuracy, then method name. Rows without a Folds-10 result sort
/// first. Throws Error on no reports or a repeated (method, protocol).
ComparisonTable compare(std::span<const EvaluationReport> reports, const RunInfo& run = {});

/// Table-4-shaped markdown: metric x protocol columns, 3 decimals half-up.
std::string to_markdown(const ComparisonTable& table);
/// One row per method with each protocol's matrix cells and full-precision
/// metrics; "#" comment lines carry the RunInfo.
std::string to_csv(const ComparisonTable& table);
ComparisonTable read_comparison_csv(std::istream& in);
ComparisonTable read_comparison_csv(const std::filesystem::path& path);

}  // namespace cardio
