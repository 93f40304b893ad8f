#include <benchmark/benchmark.h>

#include <vector>

#include "cardio/data.hpp"
#include "cardio/decision_tree.hpp"
#include "cardio/learners.hpp"
#include "cardio/metrics.hpp"
#include "cardio/ontology.hpp"
#include "cardio/swrl.hpp"
#include "cardio/tree2rules.hpp"
#include "synthetic.hpp"

using namespace cardio;

namespace {

const Dataset& cohort(std::size_t n) {
  static std::vector<std::pair<std::size_t, Dataset>> cache;
  for (const auto& [size, d] : cache)
    if (size == n) return d;
  cache.emplace_back(n, testing::make_cohort(n, 2024));
  return cache.back().second;
}

void BM_Deduplicate(benchmark::State& state) {
  const auto& d = cohort(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(deduplicate(d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Deduplicate)->Arg(10000)->Arg(70000)->Unit(benchmark::kMillisecond);

void BM_TreeFit(benchmark::State& state) {
  const auto& d = cohort(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DecisionTree::fit(d, TreeParams{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TreeFit)->Arg(5000)->Arg(40000)->Unit(benchmark::kMillisecond);

void BM_RuleExtraction(benchmark::State& state) {
  const auto tree = DecisionTree::fit(cohort(20000), TreeParams{});
  for (auto _ : state) benchmark::DoNotOptimize(extract_rules(tree));
  state.counters["leaves"] = static_cast<double>(tree.leaf_count());
}
BENCHMARK(BM_RuleExtraction);

void BM_Inference(benchmark::State& state) {
  const auto rules = extract_rules(DecisionTree::fit(cohort(20000), TreeParams{}));
  const auto& test = cohort(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    auto onto = build_ontology(test);
    state.ResumeTiming();
    benchmark::DoNotOptimize(infer(onto, rules));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Inference)->Arg(10000)->Arg(70000)->Unit(benchmark::kMillisecond);

void BM_SwrlParse(benchmark::State& state) {
  const auto text = serialize_swrl(extract_rules(DecisionTree::fit(cohort(20000), TreeParams{})));
  for (auto _ : state) benchmark::DoNotOptimize(parse_swrl(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_SwrlParse);

void BM_Confusion(benchmark::State& state) {
  const auto& d = cohort(70000);
  std::vector<int> actual, predicted;
  Rng rng(3);
  for (const auto& r : d.records) {
    actual.push_back(r.cardio);
    predicted.push_back(uniform_unit(rng) < 0.75 ? r.cardio : 1 - r.cardio);
  }
  for (auto _ : state) benchmark::DoNotOptimize(MetricSet::of(confusion(predicted, actual)));
  state.SetItemsProcessed(state.iterations() * 70000);
}
BENCHMARK(BM_Confusion);

}  // namespace

BENCHMARK_MAIN();
