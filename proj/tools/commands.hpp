#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cardio/data.hpp"
#include "cardio/evaluation.hpp"
#include "cardio/learners.hpp"
#include "cardio/report.hpp"

namespace cardio::cli {

struct RunConfig {
  std::filesystem::path input;
  char delimiter = ';';
  std::vector<Method> methods;
  std::vector<Protocol> protocols;
  std::uint64_t seed = 1;
  bool stratified = true;  // 10-fold partitioning
  HyperParams params;
  std::filesystem::path out = "out";

  /// Seed, selections and hyperparameters, plus the input path and the
  /// fingerprint of `data` when given.
  RunInfo info(const Dataset* data = nullptr) const;
};

/// Parses "dt,lr" / "all" / "ontology" lists; throws Error on unknown names.
std::vector<Method> parse_methods(std::string_view list);
std::vector<Protocol> parse_protocols(std::string_view list);

/// Writes <out>/cardio_clean.csv and <out>/prepare_summary.txt.
void cmd_prepare(const RunConfig& config, std::ostream& log);

/// Writes one report_<method>_<protocol>.txt per job plus comparison.md and
/// comparison.csv. Nothing is written unless every job succeeds.
void cmd_run(const RunConfig& config, std::ostream& log);

/// Per protocol, writes rules.swrl, ontology.ttl, inference_summary.txt and
/// report.txt under <out>/<protocol>/ (folds10 puts rules and Turtle under
/// fold_NN/).
void cmd_ontology(const RunConfig& config, std::ostream& log);

/// Reads `config.input` (or <out>/comparison.csv when empty) and writes one
/// <metric>.svg per metric into <out>.
void cmd_figures(const RunConfig& config, std::ostream& log);

/// Writes all files or none: each is staged next to its target and renamed
/// into place once every file has been staged.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path root) : root_(std::move(root)) {}
  void add(const std::filesystem::path& relative, std::string contents);
  /// Returns the written paths.
  std::vector<std::filesystem::path> commit();

 private:
  std::filesystem::path root_;
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace cardio::cli
