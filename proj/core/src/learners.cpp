#include "cardio/learners.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "cardio/error.hpp"
#include "cardio/random.hpp"
#include "cardio/text.hpp"

namespace cardio {

// ---------------------------------------------------------------------------
// Names

std::string_view name(Algorithm a) {
  switch (a) {
    case Algorithm::decision_tree: return "decision_tree";
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::logistic_regression: return "logistic_regression";
    case Algorithm::naive_bayes: return "naive_bayes";
    case Algorithm::knn: return "knn";
    case Algorithm::linear_svm: return "linear_svm";
    case Algorithm::mlp: return "mlp";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(std::string_view s) {
  for (Algorithm a : kAllAlgorithms)
    if (s == name(a)) return a;
  if (s == "dt") return Algorithm::decision_tree;
  if (s == "rf") return Algorithm::random_forest;
  if (s == "lr") return Algorithm::logistic_regression;
  if (s == "nb") return Algorithm::naive_bayes;
  if (s == "svm") return Algorithm::linear_svm;
  if (s == "ann") return Algorithm::mlp;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hyperparameters

namespace {

struct ParamField {
  std::string_view key;
  std::optional<Algorithm> owner;  // nullopt: shared by all
  std::function<std::string(const HyperParams&)> get;
  std::function<void(HyperParams&, std::string_view)> set;
};

std::size_t to_count(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw Error("hyperparameter " + std::string(key) + " expects a non-negative integer, got '" +
                std::string(v) + "'");
  return out;
}

double to_real(std::string_view key, std::string_view v) {
  auto d = text::parse_decimal(v);
  if (!d || !std::isfinite(*d))
    throw Error("hyperparameter " + std::string(key) + " expects a number, got '" +
                std::string(v) + "'");
  return *d;
}

bool to_flag(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error("hyperparameter " + std::string(key) + " expects true or false, got '" +
              std::string(v) + "'");
}

template <typename T>
std::string show(T v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return text::decimal(v);
  } else {
    return std::to_string(v);
  }
}

#define CARDIO_FIELD(KEY, OWNER, MEMBER, CONVERT)                                \
  ParamField {                                                                   \
    KEY, OWNER, [](const HyperParams& p) { return show(p.MEMBER); },             \
        [](HyperParams& p, std::string_view v) { p.MEMBER = CONVERT(KEY, v); }   \
  }

const std::vector<ParamField>& param_fields() {
  static const std::vector<ParamField> fields = {
      ParamField{"seed", std::nullopt, [](const HyperParams& p) { return show(p.seed); },
                 [](HyperParams& p, std::string_view v) {
                   std::uint64_t s = 0;
                   auto res = std::from_chars(v.data(), v.data() + v.size(), s);
                   if (res.ec != std::errc() || res.ptr != v.data() + v.size())
                     throw Error("hyperparameter seed expects an unsigned integer");
                   p.seed = s;
                 }},
      CARDIO_FIELD("tree.min_leaf", Algorithm::decision_tree, tree.min_leaf, to_count),
      CARDIO_FIELD("tree.max_depth", Algorithm::decision_tree, tree.max_depth, to_count),
      CARDIO_FIELD("tree.gain_ratio", Algorithm::decision_tree, tree.use_gain_ratio, to_flag),
      CARDIO_FIELD("tree.prune", Algorithm::decision_tree, tree.prune, to_flag),
      CARDIO_FIELD("tree.confidence", Algorithm::decision_tree, tree.confidence, to_real),
      CARDIO_FIELD("forest.trees", Algorithm::random_forest, forest.trees, to_count),
      CARDIO_FIELD("forest.features_per_split", Algorithm::random_forest,
                   forest.features_per_split, to_count),
      CARDIO_FIELD("forest.bootstrap", Algorithm::random_forest, forest.bootstrap, to_flag),
      CARDIO_FIELD("forest.min_leaf", Algorithm::random_forest, forest.min_leaf, to_count),
      CARDIO_FIELD("logistic.ridge", Algorithm::logistic_regression, logistic.ridge, to_real),
      CARDIO_FIELD("logistic.tolerance", Algorithm::logistic_regression, logistic.tolerance,
                   to_real),
      CARDIO_FIELD("logistic.max_iterations", Algorithm::logistic_regression,
                   logistic.max_iterations, to_count),
      CARDIO_FIELD("knn.k", Algorithm::knn, knn.k, to_count),
      CARDIO_FIELD("knn.normalize", Algorithm::knn, knn.normalize, to_flag),
      CARDIO_FIELD("svm.c", Algorithm::linear_svm, svm.c, to_real),
      CARDIO_FIELD("svm.iterations", Algorithm::linear_svm, svm.iterations, to_count),
      CARDIO_FIELD("svm.step", Algorithm::linear_svm, svm.step, to_real),
      CARDIO_FIELD("svm.zscore", Algorithm::linear_svm, svm.zscore, to_flag),
      CARDIO_FIELD("mlp.hidden", Algorithm::mlp, mlp.hidden, to_count),
      CARDIO_FIELD("mlp.learning_rate", Algorithm::mlp, mlp.learning_rate, to_real),
      CARDIO_FIELD("mlp.momentum", Algorithm::mlp, mlp.momentum, to_real),
      CARDIO_FIELD("mlp.epochs", Algorithm::mlp, mlp.epochs, to_count),
  };
  return fields;
}

#undef CARDIO_FIELD

}  // namespace

std::string HyperParams::describe() const {
  std::string out;
  for (const auto& f : param_fields()) {
    if (!out.empty()) out += ' ';
    out += std::string(f.key) + "=" + f.get(*this);
  }
  return out;
}

std::string HyperParams::describe(Algorithm a) const {
  std::string out;
  for (const auto& f : param_fields()) {
    if (f.owner && *f.owner != a) continue;
    if (!out.empty()) out += ' ';
    out += std::string(f.key) + "=" + f.get(*this);
  }
  return out;
}

void HyperParams::set(std::string_view key, std::string_view value) {
  for (const auto& f : param_fields()) {
    if (f.key == key) {
      f.set(*this, value);
      return;
    }
  }
  throw Error("unknown hyperparameter '" + std::string(key) + "'");
}

HyperParams HyperParams::parse(std::string_view described) {
  HyperParams p;
  std::istringstream in{std::string(described)};
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("hyperparameter '" + item + "' lacks '='");
    p.set(std::string_view(item).substr(0, eq), std::string_view(item).substr(eq + 1));
  }
  p.check();
  return p;
}

void HyperParams::check() const {
  auto positive = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("hyperparameter ") + what + " must be positive");
  };
  positive(tree.min_leaf >= 1, "tree.min_leaf");
  positive(tree.confidence > 0 && tree.confidence <= 0.5, "tree.confidence (and at most 0.5)");
  positive(forest.trees >= 1, "forest.trees");
  positive(forest.min_leaf >= 1, "forest.min_leaf");
  positive(logistic.ridge >= 0, "logistic.ridge (or zero)");
  positive(logistic.tolerance > 0, "logistic.tolerance");
  positive(logistic.max_iterations >= 1, "logistic.max_iterations");
  positive(knn.k >= 1, "knn.k");
  positive(svm.c > 0, "svm.c");
  positive(svm.iterations >= 1, "svm.iterations");
  positive(svm.step > 0, "svm.step");
  positive(mlp.hidden >= 1, "mlp.hidden");
  positive(mlp.learning_rate > 0, "mlp.learning_rate");
  positive(mlp.momentum >= 0, "mlp.momentum (or zero)");
  positive(mlp.epochs >= 1, "mlp.epochs");
}

// ---------------------------------------------------------------------------
// Scaling

FeatureScaler FeatureScaler::identity() {
  FeatureScaler s;
  s.offset.fill(0.0);
  s.factor.fill(1.0);
  return s;
}

FeatureScaler FeatureScaler::zscore(std::span<const PatientRecord> records) {
  FeatureScaler s = identity();
  if (records.empty()) return s;
  const double n = static_cast<double>(records.size());
  for (Attribute a : kAllAttributes) {
    double mean = 0.0;
    for (const auto& r : records) mean += r.value(a);
    mean /= n;
    double var = 0.0;
    for (const auto& r : records) var += (r.value(a) - mean) * (r.value(a) - mean);
    var /= n;
    s.offset[index(a)] = mean;
    s.factor[index(a)] = var > 0 ? 1.0 / std::sqrt(var) : 1.0;
  }
  return s;
}

FeatureScaler FeatureScaler::minmax(std::span<const PatientRecord> records, double lo, double hi) {
  FeatureScaler s = identity();
  if (records.empty()) return s;
  for (Attribute a : kAllAttributes) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (const auto& r : records) {
      mn = std::min(mn, r.value(a));
      mx = std::max(mx, r.value(a));
    }
    // x -> lo + (x - mn) * (hi - lo) / (mx - mn), written as (x - offset) * factor
    if (mx > mn) {
      double factor = (hi - lo) / (mx - mn);
      s.factor[index(a)] = factor;
      s.offset[index(a)] = mn - lo / factor;
    } else {
      s.factor[index(a)] = 0.0;
      s.offset[index(a)] = 0.0;
    }
  }
  return s;
}

FeatureVector FeatureScaler::apply(const PatientRecord& r) const {
  FeatureVector out{};
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    double x = r.value(kAllAttributes[i]);
    out[i] = (x - offset[i]) * factor[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prediction

int RandomForest::predict(const PatientRecord& r) const {
  std::size_t votes = 0;
  for (const auto& t : trees) votes += static_cast<std::size_t>(t.predict(r));
  return 2 * votes > trees.size() ? 1 : 0;
}

double LogisticModel::decision(const PatientRecord& r) const {
  auto x = scaler.apply(r);
  double z = intercept;
  for (std::size_t i = 0; i < kAttributeCount; ++i) z += weights[i] * x[i];
  return z;
}

std::array<double, 2> NaiveBayesModel::log_posterior(const PatientRecord& r) const {
  std::array<double, 2> lp = log_prior;
  for (Attribute a : kAllAttributes) {
    const auto& f = features[index(a)];
    const double x = r.value(a);
    for (int c = 0; c < 2; ++c) {
      if (f.gaussian) {
        const auto& g = f.normal[c];
        const double z = (x - g.mean) / g.stddev;
        lp[c] += -0.5 * z * z - std::log(g.stddev) - 0.5 * std::log(2 * std::numbers::pi);
      } else {
        const auto domain = info(a).domain;
        auto it = std::find(domain.begin(), domain.end(), x);
        if (it != domain.end())
          lp[c] += f.log_prob[c][static_cast<std::size_t>(it - domain.begin())];
      }
    }
  }
  return lp;
}

int NaiveBayesModel::predict(const PatientRecord& r) const {
  auto lp = log_posterior(r);
  return lp[1] > lp[0] ? 1 : 0;
}

int KnnModel::predict(const PatientRecord& r) const {
  const auto q = scaler.apply(r);
  const std::size_t kk = std::min(k, points.size());
  // (distance, training index) of the current k best, kept sorted.
  std::vector<std::pair<double, std::size_t>> best;
  best.reserve(kk + 1);
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    double d = 0.0;
    std::size_t j = 0;
    for (; j < kAttributeCount; ++j) {
      const double diff = p[j] - q[j];
      d += diff * diff;
      if (d > bound) break;
    }
    if (j < kAttributeCount) continue;
    if (best.size() == kk && !(d < bound)) continue;  // equal distance: earlier index wins
    auto pos = std::upper_bound(best.begin(), best.end(), std::make_pair(d, i));
    best.insert(pos, {d, i});
    if (best.size() > kk) best.pop_back();
    if (best.size() == kk) bound = best.back().first;
  }
  std::size_t ones = 0;
  for (const auto& [d, i] : best) ones += labels[i];
  return 2 * ones > best.size() ? 1 : 0;
}

double LinearSvmModel::decision(const PatientRecord& r) const {
  auto x = scaler.apply(r);
  double z = bias;
  for (std::size_t i = 0; i < kAttributeCount; ++i) z += weights[i] * x[i];
  return z;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Forward pass; fills `hidden_out` (size h) and returns the output activation.
double mlp_forward(std::span<const double> w, std::size_t h, const FeatureVector& x,
                   std::vector<double>& hidden_out) {
  constexpr std::size_t stride = kAttributeCount + 1;
  hidden_out.resize(h);
  for (std::size_t u = 0; u < h; ++u) {
    const double* wu = w.data() + u * stride;
    double z = wu[kAttributeCount];
    for (std::size_t i = 0; i < kAttributeCount; ++i) z += wu[i] * x[i];
    hidden_out[u] = sigmoid(z);
  }
  const double* wo = w.data() + h * stride;
  double z = wo[h];
  for (std::size_t u = 0; u < h; ++u) z += wo[u] * hidden_out[u];
  return sigmoid(z);
}

// Adds d(0.5 (o - y)^2)/dw for one example into `grad`, returns the loss.
double mlp_backprop(std::span<const double> w, std::size_t h, const FeatureVector& x, int y,
                    std::vector<double>& hidden_out, std::span<double> grad) {
  constexpr std::size_t stride = kAttributeCount + 1;
  const double o = mlp_forward(w, h, x, hidden_out);
  const double err = o - static_cast<double>(y);
  const double delta_out = err * o * (1.0 - o);
  const double* wo = w.data() + h * stride;
  double* go = grad.data() + h * stride;
  for (std::size_t u = 0; u < h; ++u) {
    go[u] += delta_out * hidden_out[u];
    const double hu = hidden_out[u];
    const double delta_h = delta_out * wo[u] * hu * (1.0 - hu);
    double* gu = grad.data() + u * stride;
    for (std::size_t i = 0; i < kAttributeCount; ++i) gu[i] += delta_h * x[i];
    gu[kAttributeCount] += delta_h;
  }
  go[h] += delta_out;
  return 0.5 * err * err;
}

}  // namespace

double MlpModel::output(const PatientRecord& r) const {
  std::vector<double> hidden_out;
  return mlp_forward(params, hidden, scaler.apply(r), hidden_out);
}

// ---------------------------------------------------------------------------
// Objectives

double SvmObjective::value(std::span<const double> params) const {
  double reg = 0.0;
  for (std::size_t i = 0; i < kAttributeCount; ++i) reg += params[i] * params[i];
  double loss = 0.0;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const double y = labels[n] == 1 ? 1.0 : -1.0;
    double z = params[kAttributeCount];
    for (std::size_t i = 0; i < kAttributeCount; ++i) z += params[i] * inputs[n][i];
    loss += std::max(0.0, 1.0 - y * z);
  }
  return 0.5 * lambda * reg + loss / static_cast<double>(inputs.size());
}

std::vector<double> SvmObjective::gradient(std::span<const double> params) const {
  std::vector<double> g(kAttributeCount + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const double y = labels[n] == 1 ? 1.0 : -1.0;
    double z = params[kAttributeCount];
    for (std::size_t i = 0; i < kAttributeCount; ++i) z += params[i] * inputs[n][i];
    if (y * z < 1.0) {
      for (std::size_t i = 0; i < kAttributeCount; ++i) g[i] -= y * inputs[n][i] * inv_n;
      g[kAttributeCount] -= y * inv_n;
    }
  }
  for (std::size_t i = 0; i < kAttributeCount; ++i) g[i] += lambda * params[i];
  return g;
}

double MlpObjective::value(std::span<const double> params) const {
  std::vector<double> hidden_out;
  double loss = 0.0;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const double e = mlp_forward(params, hidden, inputs[n], hidden_out) - labels[n];
    loss += 0.5 * e * e;
  }
  return loss / static_cast<double>(inputs.size());
}

std::vector<double> MlpObjective::gradient(std::span<const double> params) const {
  std::vector<double> g(params.size(), 0.0);
  std::vector<double> hidden_out;
  for (std::size_t n = 0; n < inputs.size(); ++n)
    mlp_backprop(params, hidden, inputs[n], labels[n], hidden_out, g);
  for (auto& v : g) v /= static_cast<double>(inputs.size());
  return g;
}

// ---------------------------------------------------------------------------
// Training

namespace {

void require_both_classes(std::span<const PatientRecord> records, Algorithm a) {
  std::array<std::size_t, 2> counts{0, 0};
  for (const auto& r : records) ++counts[r.cardio == 1 ? 1 : 0];
  if (counts[0] == 0 || counts[1] == 0)
    throw TrainingError(std::string(name(a)) + " needs both classes in the training set, got " +
                        std::to_string(counts[0]) + " absence / " + std::to_string(counts[1]) +
                        " presence");
}

RandomForest train_forest(std::span<const PatientRecord> records, const HyperParams& p) {
  TreeParams tp;
  tp.min_leaf = p.forest.min_leaf;
  tp.max_depth = 0;
  tp.prune = false;
  tp.use_gain_ratio = p.tree.use_gain_ratio;
  tp.features_per_split = p.forest.features_per_split;

  RandomForest forest;
  forest.trees.reserve(p.forest.trees);
  std::vector<PatientRecord> sample;
  for (std::size_t t = 0; t < p.forest.trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(p.seed, t);
    if (p.forest.bootstrap) {
      Rng rng(derive_seed(tree_seed, 0));
      sample.clear();
      sample.reserve(records.size());
      for (std::size_t i = 0; i < records.size(); ++i)
        sample.push_back(records[uniform_index(rng, records.size())]);
      forest.trees.push_back(DecisionTree::fit(sample, tp, derive_seed(tree_seed, 1)));
    } else {
      forest.trees.push_back(DecisionTree::fit(records, tp, derive_seed(tree_seed, 1)));
    }
  }
  return forest;
}

LogisticModel train_logistic(std::span<const PatientRecord> records, const HyperParams& p) {
  require_both_classes(records, Algorithm::logistic_regression);
  LogisticModel m;
  m.scaler = FeatureScaler::zscore(records);
  const auto n = static_cast<Eigen::Index>(records.size());
  constexpr Eigen::Index d = kAttributeCount + 1;  // intercept last
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto f = m.scaler.apply(records[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < d - 1; ++j) x(i, j) = f[static_cast<std::size_t>(j)];
    x(i, d - 1) = 1.0;
    y(i) = records[static_cast<std::size_t>(i)].cardio == 1 ? 1.0 : 0.0;
  }
  Eigen::VectorXd ridge = Eigen::VectorXd::Constant(d, p.logistic.ridge);
  ridge(d - 1) = 0.0;

  auto objective = [&](const Eigen::VectorXd& beta) {
    Eigen::VectorXd z = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      // log(1 + exp(z)) computed stably
      const double zi = z(i);
      const double softplus = zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
      ll += y(i) * zi - softplus;
    }
    return ll - 0.5 * beta.cwiseProduct(ridge).dot(beta);
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  double current = objective(beta);
  for (std::size_t it = 0; it < p.logistic.max_iterations; ++it) {
    Eigen::VectorXd prob = (x * beta).unaryExpr([](double z) { return sigmoid(z); });
    Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
    Eigen::VectorXd grad = x.transpose() * (y - prob) - ridge.cwiseProduct(beta);
    Eigen::MatrixXd hess = x.transpose() * w.asDiagonal() * x;
    hess.diagonal() += ridge;
    hess.diagonal().array() += 1e-12;
    Eigen::VectorXd step = hess.ldlt().solve(grad);
    // Step halving keeps the penalized likelihood monotone on near-separable data.
    double scale = 1.0;
    Eigen::VectorXd next = beta + step;
    double value = objective(next);
    for (int halve = 0; halve < 30 && value < current; ++halve) {
      scale *= 0.5;
      next = beta + scale * step;
      value = objective(next);
    }
    const double change = (scale * step).cwiseAbs().maxCoeff();
    if (value >= current) {
      beta = next;
      current = value;
    }
    if (change < p.logistic.tolerance) break;
  }
  for (std::size_t j = 0; j < kAttributeCount; ++j)
    m.weights[j] = beta(static_cast<Eigen::Index>(j));
  m.intercept = beta(d - 1);
  return m;
}

NaiveBayesModel train_naive_bayes(std::span<const PatientRecord> records) {
  require_both_classes(records, Algorithm::naive_bayes);
  NaiveBayesModel m;
  std::array<double, 2> count{0, 0};
  for (const auto& r : records) count[r.cardio == 1 ? 1 : 0] += 1;
  const double n = count[0] + count[1];
  for (int c = 0; c < 2; ++c) m.log_prior[c] = std::log(count[c] / n);

  for (Attribute a : kAllAttributes) {
    auto& f = m.features[index(a)];
    if (kind(a) == AttributeKind::numeric) {
      f.gaussian = true;
      for (int c = 0; c < 2; ++c) {
        double mean = 0.0;
        for (const auto& r : records)
          if (r.cardio == c) mean += r.value(a);
        mean /= count[c];
        double var = 0.0;
        for (const auto& r : records)
          if (r.cardio == c) var += (r.value(a) - mean) * (r.value(a) - mean);
        var /= count[c];
        f.normal[c] = {mean, std::max(std::sqrt(var), 1e-6)};
      }
    } else {
      f.gaussian = false;
      const auto domain = info(a).domain;
      for (int c = 0; c < 2; ++c) {
        std::vector<double> hits(domain.size(), 1.0);  // Laplace
        for (const auto& r : records) {
          if (r.cardio != c) continue;
          auto it = std::find(domain.begin(), domain.end(), r.value(a));
          if (it != domain.end()) hits[static_cast<std::size_t>(it - domain.begin())] += 1.0;
        }
        const double total = count[c] + static_cast<double>(domain.size());
        f.log_prob[c].resize(domain.size());
        for (std::size_t v = 0; v < domain.size(); ++v) f.log_prob[c][v] = std::log(hits[v] / total);
      }
    }
  }
  return m;
}

KnnModel train_knn(std::span<const PatientRecord> records, const HyperParams& p) {
  KnnModel m;
  m.k = p.knn.k;
  m.scaler = p.knn.normalize ? FeatureScaler::minmax(records, 0.0, 1.0) : FeatureScaler::identity();
  m.points.reserve(records.size());
  m.labels.reserve(records.size());
  for (const auto& r : records) {
    m.points.push_back(m.scaler.apply(r));
    m.labels.push_back(static_cast<std::uint8_t>(r.cardio == 1 ? 1 : 0));
  }
  return m;
}

LinearSvmModel train_svm(std::span<const PatientRecord> records, const HyperParams& p) {
  require_both_classes(records, Algorithm::linear_svm);
  LinearSvmModel m;
  m.scaler = p.svm.zscore ? FeatureScaler::zscore(records) : FeatureScaler::minmax(records, 0.0, 1.0);
  std::vector<FeatureVector> inputs;
  std::vector<int> labels;
  inputs.reserve(records.size());
  labels.reserve(records.size());
  for (const auto& r : records) {
    inputs.push_back(m.scaler.apply(r));
    labels.push_back(r.cardio);
  }
  const double lambda = 1.0 / (p.svm.c * static_cast<double>(records.size()));
  SvmObjective objective{inputs, labels, lambda};

  // Full-batch subgradient descent with a 1/sqrt(t) step; keep the best iterate.
  std::vector<double> params(kAttributeCount + 1, 0.0);
  std::vector<double> best = params;
  double best_value = objective.value(params);
  for (std::size_t t = 1; t <= p.svm.iterations; ++t) {
    auto g = objective.gradient(params);
    const double eta = p.svm.step / std::sqrt(static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= eta * g[i];
    const double v = objective.value(params);
    if (v < best_value) {
      best_value = v;
      best = params;
    }
  }
  std::copy(best.begin(), best.begin() + kAttributeCount, m.weights.begin());
  m.bias = best[kAttributeCount];
  return m;
}

MlpModel train_mlp(std::span<const PatientRecord> records, const HyperParams& p) {
  require_both_classes(records, Algorithm::mlp);
  MlpModel m;
  m.hidden = p.mlp.hidden;
  m.scaler = FeatureScaler::minmax(records, -1.0, 1.0);
  Rng rng(p.seed);
  m.params.resize(MlpModel::param_count(m.hidden));
  for (auto& w : m.params) w = uniform_unit(rng) * 0.1 - 0.05;

  std::vector<FeatureVector> inputs;
  inputs.reserve(records.size());
  for (const auto& r : records) inputs.push_back(m.scaler.apply(r));
  auto order = shuffled_indices(records.size(), derive_seed(p.seed, 1));

  // Online backpropagation with momentum, presentation order fixed per seed.
  std::vector<double> grad(m.params.size());
  std::vector<double> velocity(m.params.size(), 0.0);
  std::vector<double> hidden_out;
  for (std::size_t epoch = 0; epoch < p.mlp.epochs; ++epoch) {
    for (auto i : order) {
      std::fill(grad.begin(), grad.end(), 0.0);
      mlp_backprop(m.params, m.hidden, inputs[i], records[i].cardio, hidden_out, grad);
      for (std::size_t j = 0; j < m.params.size(); ++j) {
        velocity[j] = p.mlp.momentum * velocity[j] - p.mlp.learning_rate * grad[j];
        m.params[j] += velocity[j];
      }
    }
  }
  return m;
}

}  // namespace

TrainedModel::TrainedModel(HyperParams params, ModelState state)
    : params_(std::move(params)), state_(std::move(state)) {}

Algorithm TrainedModel::algorithm() const {
  return kAllAlgorithms[state_.index()];
}

int TrainedModel::predict(const PatientRecord& r) const {
  return std::visit([&](const auto& m) { return m.predict(r); }, state_);
}

TrainedModel train(Algorithm algorithm, std::span<const PatientRecord> train_set,
                   const HyperParams& params) {
  params.check();
  if (train_set.empty())
    throw TrainingError("cannot train " + std::string(name(algorithm)) + " on an empty set");
  switch (algorithm) {
    case Algorithm::decision_tree:
      return {params, DecisionTree::fit(train_set, params.tree, params.seed)};
    case Algorithm::random_forest:
      return {params, train_forest(train_set, params)};
    case Algorithm::logistic_regression:
      return {params, train_logistic(train_set, params)};
    case Algorithm::naive_bayes:
      return {params, train_naive_bayes(train_set)};
    case Algorithm::knn:
      return {params, train_knn(train_set, params)};
    case Algorithm::linear_svm:
      return {params, train_svm(train_set, params)};
    case Algorithm::mlp:
      return {params, train_mlp(train_set, params)};
  }
  throw Error("unknown algorithm");
}

TrainedModel train(Algorithm algorithm, const Dataset& train_set, const HyperParams& params) {
  return train(algorithm, std::span<const PatientRecord>(train_set.records), params);
}

std::vector<int> predict_batch(const TrainedModel& model, std::span<const PatientRecord> records) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(model.predict(r));
  return out;
}

std::vector<int> predict_batch(const TrainedModel& model, const Dataset& records) {
  return predict_batch(model, std::span<const PatientRecord>(records.records));
}

}  // namespace cardio
