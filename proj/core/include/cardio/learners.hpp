#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cardio/attributes.hpp"
#include "cardio/data.hpp"
#include "cardio/decision_tree.hpp"

namespace cardio {

enum class Algorithm {
  decision_tree,
  random_forest,
  logistic_regression,
  naive_bayes,
  knn,
  linear_svm,
  mlp,
};

inline constexpr std::array<Algorithm, 7> kAllAlgorithms = {
    Algorithm::decision_tree, Algorithm::random_forest, Algorithm::logistic_regression,
    Algorithm::naive_bayes,   Algorithm::knn,           Algorithm::linear_svm,
    Algorithm::mlp,
};

std::string_view name(Algorithm a);
/// Accepts canonical names and the short forms dt, rf, lr, nb, knn, svm, mlp/ann.
std::optional<Algorithm> algorithm_from_name(std::string_view s);

struct HyperParams {
  std::uint64_t seed = 1;
  TreeParams tree;
  struct Forest {
    std::size_t trees = 100;
    std::size_t features_per_split = 4;  // ceil(sqrt(11))
    bool bootstrap = true;
    std::size_t min_leaf = 1;
    friend bool operator==(const Forest&, const Forest&) = default;
  } forest;
  struct Logistic {
    double ridge = 1e-8;
    double tolerance = 1e-8;
    std::size_t max_iterations = 100;
    friend bool operator==(const Logistic&, const Logistic&) = default;
  } logistic;
  struct Knn {
    std::size_t k = 1;
    bool normalize = true;  // min-max to [0, 1]
    friend bool operator==(const Knn&, const Knn&) = default;
  } knn;
  struct Svm {
    double c = 1.0;
    std::size_t iterations = 1000;
    double step = 0.5;
    bool zscore = true;  // false: min-max to [0, 1]
    friend bool operator==(const Svm&, const Svm&) = default;
  } svm;
  struct Mlp {
    std::size_t hidden = 7;  // ceil((11 + 2) / 2)
    double learning_rate = 0.3;
    double momentum = 0.2;
    std::size_t epochs = 500;
    friend bool operator==(const Mlp&, const Mlp&) = default;
  } mlp;

  /// Space-separated key=value list. With an algorithm, only its keys and the seed.
  std::string describe() const;
  std::string describe(Algorithm a) const;
  /// Applies one key=value assignment; throws Error on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  static HyperParams parse(std::string_view described);
  void check() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Affine per-feature transform `(x - offset) * factor`, fitted on training data.
struct FeatureScaler {
  FeatureVector offset{};
  FeatureVector factor{};

  static FeatureScaler identity();
  static FeatureScaler zscore(std::span<const PatientRecord> records);
  /// Maps each feature's training range onto [lo, hi]; constant features map to 0.
  static FeatureScaler minmax(std::span<const PatientRecord> records, double lo, double hi);
  FeatureVector apply(const PatientRecord& r) const;

  friend bool operator==(const FeatureScaler&, const FeatureScaler&) = default;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  /// Majority vote, ties to class 0.
  int predict(const PatientRecord& r) const;
  friend bool operator==(const RandomForest&, const RandomForest&) = default;
};

struct LogisticModel {
  FeatureScaler scaler = FeatureScaler::identity();
  FeatureVector weights{};
  double intercept = 0.0;

  double decision(const PatientRecord& r) const;
  /// 1 iff the linear score is strictly positive.
  int predict(const PatientRecord& r) const { return decision(r) > 0.0 ? 1 : 0; }
  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

struct NaiveBayesModel {
  struct Gaussian {
    double mean = 0.0;
    double stddev = 1.0;
    friend bool operator==(const Gaussian&, const Gaussian&) = default;
  };
  /// Either a Gaussian per class (numeric attributes) or Laplace-smoothed
  /// log-probabilities over the attribute's domain per class.
  struct Feature {
    bool gaussian = true;
    std::array<Gaussian, 2> normal{};
    std::array<std::vector<double>, 2> log_prob{};
    friend bool operator==(const Feature&, const Feature&) = default;
  };
  std::array<double, 2> log_prior{};
  std::array<Feature, kAttributeCount> features{};

  std::array<double, 2> log_posterior(const PatientRecord& r) const;  // unnormalized
  int predict(const PatientRecord& r) const;
  friend bool operator==(const NaiveBayesModel&, const NaiveBayesModel&) = default;
};

struct KnnModel {
  std::size_t k = 1;
  FeatureScaler scaler = FeatureScaler::identity();
  std::vector<FeatureVector> points;
  std::vector<std::uint8_t> labels;

  /// Majority of the k nearest (Euclidean, ties by training order); vote ties to 0.
  int predict(const PatientRecord& r) const;
  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

struct LinearSvmModel {
  FeatureScaler scaler = FeatureScaler::identity();
  FeatureVector weights{};
  double bias = 0.0;

  double decision(const PatientRecord& r) const;
  int predict(const PatientRecord& r) const { return decision(r) > 0.0 ? 1 : 0; }
  friend bool operator==(const LinearSvmModel&, const LinearSvmModel&) = default;
};

/// One hidden layer of sigmoid units and a single sigmoid output.
/// `params` holds, per hidden unit h, its 11 input weights then its bias;
/// followed by the output unit's `hidden` weights and its bias.
struct MlpModel {
  FeatureScaler scaler = FeatureScaler::identity();
  std::size_t hidden = 7;
  std::vector<double> params;

  double output(const PatientRecord& r) const;
  int predict(const PatientRecord& r) const { return output(r) > 0.5 ? 1 : 0; }
  static std::size_t param_count(std::size_t hidden) {
    return hidden * (kAttributeCount + 1) + hidden + 1;
  }
  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Regularized mean hinge loss `lambda/2 |w|^2 + mean(max(0, 1 - y (w.x + b)))`
/// over pre-scaled inputs, labels in {0, 1}. Parameters are the 11 weights then b.
struct SvmObjective {
  std::span<const FeatureVector> inputs;
  std::span<const int> labels;
  double lambda;

  double value(std::span<const double> params) const;
  std::vector<double> gradient(std::span<const double> params) const;  // subgradient at kinks
};

/// Mean squared error `mean(0.5 (o - y)^2)` of an MlpModel layout over
/// pre-scaled inputs.
struct MlpObjective {
  std::span<const FeatureVector> inputs;
  std::span<const int> labels;
  std::size_t hidden;

  double value(std::span<const double> params) const;
  std::vector<double> gradient(std::span<const double> params) const;
};

using ModelState = std::variant<DecisionTree, RandomForest, LogisticModel, NaiveBayesModel,
                                KnnModel, LinearSvmModel, MlpModel>;

/// A fitted classifier. Immutable; predict is a pure function of (model, record).
class TrainedModel {
 public:
  TrainedModel(HyperParams params, ModelState state);

  Algorithm algorithm() const;
  const HyperParams& hyperparams() const { return params_; }
  const ModelState& state() const { return state_; }

  int predict(const PatientRecord& r) const;

  void save(std::ostream& out) const;
  static TrainedModel load(std::istream& in);

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  HyperParams params_;
  ModelState state_;
};

TrainedModel train(Algorithm algorithm, const Dataset& train_set, const HyperParams& params);
TrainedModel train(Algorithm algorithm, std::span<const PatientRecord> train_set,
                   const HyperParams& params);

inline int predict(const TrainedModel& model, const PatientRecord& r) { return model.predict(r); }
std::vector<int> predict_batch(const TrainedModel& model, const Dataset& records);
std::vector<int> predict_batch(const TrainedModel& model, std::span<const PatientRecord> records);

}  // namespace cardio
