#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cardio/data.hpp"
#include "cardio/learners.hpp"
#include "cardio/metrics.hpp"
#include "cardio/ontology.hpp"
#include "cardio/tree2rules.hpp"

namespace cardio {

/// The seven learners plus the ontology classifier (tree -> rules -> inference).
enum class Method {
  decision_tree,
  random_forest,
  logistic_regression,
  naive_bayes,
  knn,
  linear_svm,
  mlp,
  ontology,
};

inline constexpr std::array<Method, 8> kAllMethods = {
    Method::decision_tree, Method::random_forest, Method::logistic_regression,
    Method::naive_bayes,   Method::knn,           Method::linear_svm,
    Method::mlp,           Method::ontology,
};

std::string_view name(Method m);
/// Short table label: DT, RF, LR, NB, KNN, SVM, ANN, Ontology.
std::string_view label(Method m);
/// Accepts the learner names and short forms, and "ontology".
std::optional<Method> method_from_name(std::string_view s);
std::optional<Algorithm> learner(Method m);  // nullopt for ontology

enum class Protocol { folds10, split60 };

inline constexpr std::array<Protocol, 2> kAllProtocols = {Protocol::folds10, Protocol::split60};

std::string_view name(Protocol p);   // "folds10", "split60"
std::string_view label(Protocol p);  // "Folds-10", "Split-60%"
std::optional<Protocol> protocol_from_name(std::string_view s);

struct OntologyStats {
  std::size_t rules = 0;  // summed over folds
  std::size_t leaves = 0;
  std::size_t individuals = 0;
  std::size_t presence = 0;
  std::size_t absence = 0;
  std::size_t fallback = 0;
  std::size_t overlapping = 0;
  /// The source trees' confusion matrix on the same records.
  ConfusionMatrix tree;

  friend bool operator==(const OntologyStats&, const OntologyStats&) = default;
};

struct EvaluationReport {
  Method method = Method::decision_tree;
  Protocol protocol = Protocol::folds10;
  /// Pooled over folds for cross-validation.
  ConfusionMatrix cm;
  std::vector<ConfusionMatrix> folds;  // one per fold; a single entry for a split
  std::string hyperparameters;
  std::uint64_t seed = 1;
  std::size_t records = 0;
  std::string input_fingerprint;
  double wall_seconds = 0.0;
  std::optional<OntologyStats> ontology;

  MetricSet metrics() const { return MetricSet::of(cm); }
};

/// Everything the ontology classifier produces on one train/test partition.
struct OntologyRun {
  DecisionTree tree;
  RuleSet rules;
  Ontology ontology;  // one individual per test record, classes inferred
  InferenceReport inference;
  std::vector<int> predicted;       // from the inferred classes
  std::vector<int> tree_predicted;  // the tree applied directly
};

OntologyRun run_ontology_pipeline(const Dataset& train_set, const Dataset& test_set,
                                  const HyperParams& params);

/// Called once per fold (a split is fold 0) with the test partition and,
/// for the ontology method, the pipeline output.
using FoldObserver =
    std::function<void(std::size_t fold, const Dataset& test, const OntologyRun* run)>;

/// Trains on the first floor(fraction * N) records of a seeded shuffle
/// (spec.seed) and scores the rest. The learner is seeded with
/// derive_seed(params.seed, 0).
EvaluationReport evaluate_split(Method m, const Dataset& d, const SplitSpec& spec,
                                const HyperParams& params, const FoldObserver& observer = {});

/// k-fold cross-validation over folds drawn with `seed` (stratified unless
/// told otherwise). Fold f's learner is seeded with derive_seed(params.seed, f).
EvaluationReport evaluate_cv(Method m, const Dataset& d, std::size_t k, std::uint64_t seed,
                             const HyperParams& params, const FoldObserver& observer = {},
                             bool stratified = true);

/// 10 folds or a 60% split, both with `seed` for partitioning. `stratified`
/// applies to the folds only.
EvaluationReport evaluate(Method m, Protocol p, const Dataset& d, std::uint64_t seed,
                          const HyperParams& params, const FoldObserver& observer = {},
                          bool stratified = true);

}  // namespace cardio
