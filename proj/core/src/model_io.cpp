// Model text format (version 1):
//
//   cardio-model 1
//   algorithm <name>
//   hyperparameters <key=value ...>
//   <algorithm body>
//   end
//
// Bodies, all numbers in shortest round-trip decimal:
//   decision_tree        the DecisionTree text block ("tree N" + N node lines)
//   random_forest        "forest N" followed by N tree blocks
//   logistic_regression  scaler, "weights w1..w11", "intercept b"
//   naive_bayes          "prior lp0 lp1", then per attribute either
//                        "gaussian <attr> mean0 sd0 mean1 sd1" or
//                        "table <attr> <m> lp0[1..m] lp1[1..m]"
//   knn                  "k K", scaler, "points N", N lines of 11 values + label
//   linear_svm           scaler, "weights w1..w11", "bias b"
//   mlp                  scaler, "hidden H", "params P v1..vP"
// where scaler is "scaler o1..o11 f1..f11" (offsets then factors).

#include <istream>
#include <ostream>
#include <sstream>

#include "cardio/error.hpp"
#include "cardio/learners.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

constexpr std::string_view kMagic = "cardio-model";
constexpr int kVersion = 1;

void put(std::ostream& out, double v) { out << ' ' << text::decimal(v); }

void write_scaler(std::ostream& out, const FeatureScaler& s) {
  out << "scaler";
  for (double v : s.offset) put(out, v);
  for (double v : s.factor) put(out, v);
  out << '\n';
}

void write_vector(std::ostream& out, std::string_view label, const FeatureVector& v) {
  out << label;
  for (double x : v) put(out, x);
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw Error("model file truncated");
    return w;
  }

  void expect(std::string_view keyword) {
    auto w = word();
    if (w != keyword)
      throw Error("model file: expected '" + std::string(keyword) + "', found '" + w + "'");
  }

  double real() {
    auto w = word();
    auto v = text::parse_decimal(w);
    if (!v) throw Error("model file: bad number '" + w + "'");
    return *v;
  }

  std::size_t count() {
    auto v = real();
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw Error("model file: bad count");
    return static_cast<std::size_t>(v);
  }

  FeatureVector vector(std::string_view label) {
    expect(label);
    FeatureVector v{};
    for (auto& x : v) x = real();
    return v;
  }

  FeatureScaler scaler() {
    expect("scaler");
    FeatureScaler s;
    for (auto& x : s.offset) x = real();
    for (auto& x : s.factor) x = real();
    return s;
  }

  std::string rest_of_line() {
    std::string line;
    std::getline(in_, line);
    return std::string(text::trim(line));
  }

  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
};

struct BodyWriter {
  std::ostream& out;

  void operator()(const DecisionTree& t) const { t.write(out); }
  void operator()(const RandomForest& f) const {
    out << "forest " << f.trees.size() << '\n';
    for (const auto& t : f.trees) t.write(out);
  }
  void operator()(const LogisticModel& m) const {
    write_scaler(out, m.scaler);
    write_vector(out, "weights", m.weights);
    out << "intercept";
    put(out, m.intercept);
    out << '\n';
  }
  void operator()(const NaiveBayesModel& m) const {
    out << "prior";
    put(out, m.log_prior[0]);
    put(out, m.log_prior[1]);
    out << '\n';
    for (Attribute a : kAllAttributes) {
      const auto& f = m.features[index(a)];
      if (f.gaussian) {
        out << "gaussian " << name(a);
        for (int c = 0; c < 2; ++c) {
          put(out, f.normal[c].mean);
          put(out, f.normal[c].stddev);
        }
      } else {
        out << "table " << name(a) << ' ' << f.log_prob[0].size();
        for (int c = 0; c < 2; ++c)
          for (double v : f.log_prob[c]) put(out, v);
      }
      out << '\n';
    }
  }
  void operator()(const KnnModel& m) const {
    out << "k " << m.k << '\n';
    write_scaler(out, m.scaler);
    out << "points " << m.points.size() << '\n';
    for (std::size_t i = 0; i < m.points.size(); ++i) {
      for (std::size_t j = 0; j < kAttributeCount; ++j) {
        if (j) out << ' ';
        out << text::decimal(m.points[i][j]);
      }
      out << ' ' << int(m.labels[i]) << '\n';
    }
  }
  void operator()(const LinearSvmModel& m) const {
    write_scaler(out, m.scaler);
    write_vector(out, "weights", m.weights);
    out << "bias";
    put(out, m.bias);
    out << '\n';
  }
  void operator()(const MlpModel& m) const {
    write_scaler(out, m.scaler);
    out << "hidden " << m.hidden << '\n';
    out << "params " << m.params.size();
    for (double v : m.params) put(out, v);
    out << '\n';
  }
};

ModelState read_body(Algorithm algorithm, Reader& in) {
  switch (algorithm) {
    case Algorithm::decision_tree:
      return DecisionTree::read(in.stream());
    case Algorithm::random_forest: {
      in.expect("forest");
      RandomForest f;
      auto n = in.count();
      f.trees.reserve(n);
      for (std::size_t i = 0; i < n; ++i) f.trees.push_back(DecisionTree::read(in.stream()));
      return f;
    }
    case Algorithm::logistic_regression: {
      LogisticModel m;
      m.scaler = in.scaler();
      m.weights = in.vector("weights");
      in.expect("intercept");
      m.intercept = in.real();
      return m;
    }
    case Algorithm::naive_bayes: {
      NaiveBayesModel m;
      in.expect("prior");
      m.log_prior = {in.real(), in.real()};
      for (Attribute a : kAllAttributes) {
        auto& f = m.features[index(a)];
        auto kindword = in.word();
        auto attr = in.word();
        if (attr != name(a))
          throw Error("model file: naive_bayes attribute '" + attr + "' out of order");
        if (kindword == "gaussian") {
          f.gaussian = true;
          for (int c = 0; c < 2; ++c) f.normal[c] = {in.real(), in.real()};
        } else if (kindword == "table") {
          f.gaussian = false;
          auto width = in.count();
          for (int c = 0; c < 2; ++c) {
            f.log_prob[c].resize(width);
            for (auto& v : f.log_prob[c]) v = in.real();
          }
        } else {
          throw Error("model file: unknown naive_bayes feature kind '" + kindword + "'");
        }
      }
      return m;
    }
    case Algorithm::knn: {
      KnnModel m;
      in.expect("k");
      m.k = in.count();
      m.scaler = in.scaler();
      in.expect("points");
      auto n = in.count();
      m.points.resize(n);
      m.labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto& x : m.points[i]) x = in.real();
        m.labels[i] = static_cast<std::uint8_t>(in.count() == 1 ? 1 : 0);
      }
      return m;
    }
    case Algorithm::linear_svm: {
      LinearSvmModel m;
      m.scaler = in.scaler();
      m.weights = in.vector("weights");
      in.expect("bias");
      m.bias = in.real();
      return m;
    }
    case Algorithm::mlp: {
      MlpModel m;
      m.scaler = in.scaler();
      in.expect("hidden");
      m.hidden = in.count();
      in.expect("params");
      auto n = in.count();
      if (n != MlpModel::param_count(m.hidden))
        throw Error("model file: mlp parameter count does not match hidden size");
      m.params.resize(n);
      for (auto& v : m.params) v = in.real();
      return m;
    }
  }
  throw Error("unknown algorithm");
}

}  // namespace

void TrainedModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "algorithm " << name(algorithm()) << '\n';
  out << "hyperparameters " << params_.describe() << '\n';
  std::visit(BodyWriter{out}, state_);
  out << "end\n";
}

TrainedModel TrainedModel::load(std::istream& is) {
  Reader in(is);
  in.expect(kMagic);
  if (in.count() != kVersion) throw Error("model file: unsupported version");
  in.expect("algorithm");
  auto algo_name = in.word();
  auto algorithm = algorithm_from_name(algo_name);
  if (!algorithm) throw Error("model file: unknown algorithm '" + algo_name + "'");
  in.expect("hyperparameters");
  auto params = HyperParams::parse(in.rest_of_line());
  auto state = read_body(*algorithm, in);
  in.expect("end");
  return TrainedModel(std::move(params), std::move(state));
}

}  // namespace cardio
