#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cardio/error.hpp"
#include "cardio/learners.hpp"
#include "gradcheck.hpp"
#include "synthetic.hpp"

using namespace cardio;

namespace {

double holdout_accuracy(const TrainedModel& m, const Dataset& test) {
  auto pred = predict_batch(m, test);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < test.size(); ++i) hit += pred[i] == test.records[i].cardio;
  return static_cast<double>(hit) / static_cast<double>(test.size());
}

HyperParams quick() {
  HyperParams p;
  p.forest.trees = 25;
  p.mlp.epochs = 60;
  p.svm.iterations = 300;
  return p;
}

std::vector<FeatureVector> five_inputs() {
  Rng rng(4);
  std::vector<FeatureVector> x(5);
  for (auto& v : x)
    for (auto& c : v) c = uniform_unit(rng) * 2 - 1;
  return x;
}

}  // namespace

TEST_CASE("algorithm names") {
  for (Algorithm a : kAllAlgorithms) CHECK(algorithm_from_name(name(a)) == a);
  CHECK(algorithm_from_name("dt") == Algorithm::decision_tree);
  CHECK(algorithm_from_name("rf") == Algorithm::random_forest);
  CHECK(algorithm_from_name("lr") == Algorithm::logistic_regression);
  CHECK(algorithm_from_name("nb") == Algorithm::naive_bayes);
  CHECK(algorithm_from_name("svm") == Algorithm::linear_svm);
  CHECK(algorithm_from_name("ann") == Algorithm::mlp);
  CHECK_FALSE(algorithm_from_name("boosting"));
}

TEST_CASE("hyperparameters describe, parse and validate") {
  HyperParams p;
  p.seed = 77;
  p.tree.min_leaf = 5;
  p.knn.k = 3;
  p.svm.zscore = false;
  p.mlp.learning_rate = 0.125;
  CHECK(HyperParams::parse(p.describe()) == p);
  CHECK(p.describe(Algorithm::knn).find("knn.k=3") != std::string::npos);
  CHECK(p.describe(Algorithm::knn).find("mlp.") == std::string::npos);
  CHECK_THROWS_AS(p.set("tree.colour", "red"), Error);
  CHECK_THROWS_AS(p.set("knn.k", "many"), Error);
  p.forest.trees = 0;
  CHECK_THROWS_AS(p.check(), Error);
}

TEST_CASE("every learner beats chance on held-out data and is deterministic") {
  auto d = testing::make_cohort(2500, 31, 0.8);
  auto [train_idx, test_idx] = split_indices(d.size(), 0.6, 1);
  auto train_set = d.subset(train_idx), test_set = d.subset(test_idx);
  for (Algorithm a : kAllAlgorithms) {
    CAPTURE(name(a));
    auto m = train(a, train_set, quick());
    CHECK(m.algorithm() == a);
    CHECK(holdout_accuracy(m, test_set) > (a == Algorithm::knn ? 0.6 : 0.7));
    CHECK(train(a, train_set, quick()) == m);

    std::stringstream io;
    m.save(io);
    auto back = TrainedModel::load(io);
    CHECK(back == m);
    CHECK(predict_batch(back, test_set) == predict_batch(m, test_set));
  }
}

TEST_CASE("single-class training sets") {
  auto d = testing::make_cohort(200, 3);
  for (auto& r : d.records) r.cardio = 1;
  for (Algorithm a : {Algorithm::decision_tree, Algorithm::random_forest, Algorithm::knn}) {
    auto m = train(a, d, quick());
    CHECK(m.predict(d.records[0]) == 1);
  }
  for (Algorithm a : {Algorithm::naive_bayes, Algorithm::logistic_regression,
                      Algorithm::linear_svm, Algorithm::mlp})
    CHECK_THROWS_AS(train(a, d, quick()), TrainingError);
  CHECK_THROWS_AS(train(Algorithm::decision_tree, Dataset{}, quick()), TrainingError);
}

TEST_CASE("naive Bayes posterior matches a hand computation") {
  Dataset d;
  PatientRecord r;
  r.height = 165;
  r.weight = 70;
  r.ap_lo = 80;
  const int ages[] = {15000, 16000, 17000, 20000, 21000, 23000};
  const int chol[] = {1, 1, 2, 3, 3, 1};
  for (int i = 0; i < 6; ++i) {
    r.age = ages[i];
    r.ap_hi = 110 + 10 * i;
    r.cholesterol = chol[i];
    r.cardio = i >= 3 ? 1 : 0;
    d.records.push_back(r);
  }
  auto m = train(Algorithm::naive_bayes, d, {});
  const auto& nb = std::get<NaiveBayesModel>(m.state());

  PatientRecord q = d.records[0];
  q.age = 19000;
  q.ap_hi = 135;
  q.cholesterol = 3;

  auto gauss = [](double x, std::initializer_list<double> xs) {
    double mean = 0, var = 0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(xs.size());
    for (double v : xs) var += (v - mean) * (v - mean);
    double sd = std::max(std::sqrt(var / static_cast<double>(xs.size())), 1e-6);
    return -0.5 * ((x - mean) / sd) * ((x - mean) / sd) - std::log(sd) - 0.5 * std::log(2 * std::numbers::pi);
  };
  // Class 0 holds cholesterol {1, 1, 2}, class 1 {3, 3, 1}; Laplace over 3 values.
  double lp0 = std::log(0.5) + gauss(19000, {15000, 16000, 17000}) + gauss(135, {110, 120, 130}) +
               std::log(1.0 / 6.0);
  double lp1 = std::log(0.5) + gauss(19000, {20000, 21000, 23000}) + gauss(135, {140, 150, 160}) +
               std::log(3.0 / 6.0);
  auto got = nb.log_posterior(q);
  // The remaining attributes are identical in both classes, so they add the
  // same amount to each side.
  CHECK(got[1] - got[0] == doctest::Approx(lp1 - lp0).epsilon(1e-9));
  CHECK(m.predict(q) == (lp1 > lp0 ? 1 : 0));
}

TEST_CASE("logistic regression reaches a stationary point of the likelihood") {
  auto d = testing::make_cohort(1500, 12);
  auto m = train(Algorithm::logistic_regression, d, {});
  const auto& lr = std::get<LogisticModel>(m.state());
  std::array<double, kAttributeCount + 1> grad{};
  for (const auto& r : d.records) {
    auto x = lr.scaler.apply(r);
    const double p = 1 / (1 + std::exp(-lr.decision(r)));
    const double e = r.cardio - p;
    for (std::size_t i = 0; i < kAttributeCount; ++i) grad[i] += e * x[i];
    grad[kAttributeCount] += e;
  }
  for (double g : grad) CHECK(std::abs(g) / static_cast<double>(d.size()) < 1e-6);
  CHECK(lr.weights[index(Attribute::ap_hi)] > 0);
}

TEST_CASE("1-nearest neighbour agrees with brute force") {
  auto d = testing::make_cohort(600, 14);
  auto queries = testing::make_cohort(200, 15);
  auto m = train(Algorithm::knn, d, {});
  FeatureVector lo, hi;
  lo.fill(1e300);
  hi.fill(-1e300);
  for (const auto& r : d.records)
    for (Attribute a : kAllAttributes) {
      lo[index(a)] = std::min(lo[index(a)], r.value(a));
      hi[index(a)] = std::max(hi[index(a)], r.value(a));
    }
  auto scaled = [&](const PatientRecord& r, std::size_t i) {
    const double span = hi[i] - lo[i];
    return span > 0 ? (r.value(kAllAttributes[i]) - lo[i]) / span : 0.0;
  };
  for (const auto& q : queries.records) {
    double best = 1e300;
    int label = 0;
    for (const auto& r : d.records) {
      double dist = 0;
      for (std::size_t i = 0; i < kAttributeCount; ++i) {
        double diff = scaled(q, i) - scaled(r, i);
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        label = r.cardio;
      }
    }
    CHECK(m.predict(q) == label);
  }
}

TEST_CASE("forest holds the requested number of trees") {
  auto d = testing::make_cohort(300, 16);
  auto p = quick();
  p.forest.trees = 7;
  auto m = train(Algorithm::random_forest, d, p);
  CHECK(std::get<RandomForest>(m.state()).trees.size() == 7);
}

TEST_CASE("analytic gradients match central differences") {
  const auto x = five_inputs();
  const std::vector<int> y{1, 0, 1, 1, 0};
  Rng rng(6);

  SvmObjective svm{x, y, 0.01};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(kAttributeCount + 1);
    for (auto& v : w) v = uniform_unit(rng) - 0.5;
    CHECK(testing::max_gradient_error(svm, w) <= 1e-4);
  }

  MlpObjective mlp{x, y, 3};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(MlpModel::param_count(3));
    for (auto& v : w) v = uniform_unit(rng) * 2 - 1;
    CHECK(testing::max_gradient_error(mlp, w) <= 1e-4);
  }
}
