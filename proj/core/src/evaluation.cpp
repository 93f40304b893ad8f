#include "cardio/evaluation.hpp"

#include <chrono>
#include <variant>

#include "cardio/error.hpp"
#include "cardio/random.hpp"

namespace cardio {

std::string_view name(Method m) {
  if (auto a = learner(m)) return name(*a);
  return "ontology";
}

std::string_view label(Method m) {
  switch (m) {
    case Method::decision_tree: return "DT";
    case Method::random_forest: return "RF";
    case Method::logistic_regression: return "LR";
    case Method::naive_bayes: return "NB";
    case Method::knn: return "KNN";
    case Method::linear_svm: return "SVM";
    case Method::mlp: return "ANN";
    case Method::ontology: return "Ontology";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view s) {
  if (s == "ontology" || s == "onto") return Method::ontology;
  if (auto a = algorithm_from_name(s)) return static_cast<Method>(*a);
  for (Method m : kAllMethods)
    if (s == label(m)) return m;
  return std::nullopt;
}

std::optional<Algorithm> learner(Method m) {
  if (m == Method::ontology) return std::nullopt;
  return static_cast<Algorithm>(m);
}

std::string_view name(Protocol p) { return p == Protocol::folds10 ? "folds10" : "split60"; }
std::string_view label(Protocol p) { return p == Protocol::folds10 ? "Folds-10" : "Split-60%"; }

std::optional<Protocol> protocol_from_name(std::string_view s) {
  for (Protocol p : kAllProtocols)
    if (s == name(p) || s == label(p)) return p;
  return std::nullopt;
}

OntologyRun run_ontology_pipeline(const Dataset& train_set, const Dataset& test_set,
                                  const HyperParams& params) {
  auto model = train(Algorithm::decision_tree, train_set, params);
  OntologyRun run{std::get<DecisionTree>(model.state()), {}, {}, {}, {}, {}};
  run.rules = extract_rules(run.tree);
  run.ontology = build_ontology(test_set);
  run.inference = infer(run.ontology, run.rules);
  run.predicted.reserve(test_set.size());
  run.tree_predicted.reserve(test_set.size());
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    run.predicted.push_back(to_class(*run.ontology.individuals()[i].inferred_class));
    run.tree_predicted.push_back(run.tree.predict(test_set.records[i]));
  }
  return run;
}

namespace {

std::vector<int> labels_of(const Dataset& d) {
  std::vector<int> y;
  y.reserve(d.size());
  for (const auto& r : d.records) y.push_back(r.cardio);
  return y;
}

// Trains and scores one partition, accumulating into `report`.
void score_fold(Method m, const Dataset& train_set, const Dataset& test_set,
                const HyperParams& params, std::size_t fold, EvaluationReport& report,
                const FoldObserver& observer) {
  const auto actual = labels_of(test_set);
  ConfusionMatrix cm;
  if (auto algorithm = learner(m)) {
    auto model = train(*algorithm, train_set, params);
    cm = confusion(predict_batch(model, test_set), actual);
    if (observer) observer(fold, test_set, nullptr);
  } else {
    auto run = run_ontology_pipeline(train_set, test_set, params);
    cm = confusion(run.predicted, actual);
    auto& stats = report.ontology ? *report.ontology : report.ontology.emplace();
    stats.rules += run.rules.rules.size();
    stats.leaves += run.tree.leaf_count();
    stats.individuals += run.inference.individuals;
    stats.presence += run.inference.presence;
    stats.absence += run.inference.absence;
    stats.fallback += run.inference.fallback;
    stats.overlapping += run.inference.overlapping;
    stats.tree += confusion(run.tree_predicted, actual);
    if (observer) observer(fold, test_set, &run);
  }
  report.folds.push_back(cm);
  report.cm += cm;
}

HyperParams fold_params(const HyperParams& params, std::size_t fold) {
  HyperParams p = params;
  p.seed = derive_seed(params.seed, fold);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

EvaluationReport blank_report(Method m, Protocol p, const Dataset& d, std::uint64_t seed,
                              const HyperParams& params) {
  EvaluationReport report;
  report.method = m;
  report.protocol = p;
  report.hyperparameters = params.describe(learner(m).value_or(Algorithm::decision_tree));
  report.seed = seed;
  report.records = d.size();
  return report;
}

}  // namespace

EvaluationReport evaluate_split(Method m, const Dataset& d, const SplitSpec& spec,
                                const HyperParams& params, const FoldObserver& observer) {
  spec.check();
  params.check();
  const auto start = std::chrono::steady_clock::now();
  auto report = blank_report(m, Protocol::split60, d, spec.seed, params);
  auto [train_idx, test_idx] = split_indices(d.size(), spec.train_fraction, spec.seed);
  if (train_idx.empty() || test_idx.empty())
    throw Error("percentage split of " + std::to_string(d.size()) +
                " records leaves an empty partition");
  score_fold(m, d.subset(train_idx), d.subset(test_idx), fold_params(params, 0), 0, report,
             observer);
  report.wall_seconds = seconds_since(start);
  return report;
}

EvaluationReport evaluate_cv(Method m, const Dataset& d, std::size_t k, std::uint64_t seed,
                             const HyperParams& params, const FoldObserver& observer,
                             bool stratified) {
  if (k < 2) throw Error("cross-validation needs at least 2 folds");
  params.check();
  const auto start = std::chrono::steady_clock::now();
  auto report = blank_report(m, Protocol::folds10, d, seed, params);
  const auto folds = stratified_folds(d, k, seed, stratified);
  std::vector<char> in_test(d.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (auto i : folds[f]) in_test[i] = 1;
    std::vector<std::size_t> train_idx;
    train_idx.reserve(d.size() - folds[f].size());
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!in_test[i]) train_idx.push_back(i);
    score_fold(m, d.subset(train_idx), d.subset(folds[f]), fold_params(params, f), f, report,
               observer);
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

EvaluationReport evaluate(Method m, Protocol p, const Dataset& d, std::uint64_t seed,
                          const HyperParams& params, const FoldObserver& observer,
                          bool stratified) {
  if (p == Protocol::folds10) return evaluate_cv(m, d, 10, seed, params, observer, stratified);
  SplitSpec spec;
  spec.seed = seed;
  return evaluate_split(m, d, spec, params, observer);
}

}  // namespace cardio
