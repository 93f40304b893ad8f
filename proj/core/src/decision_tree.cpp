#include "cardio/decision_tree.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cardio/error.hpp"
#include "cardio/random.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

double entropy(double n0, double n1) {
  double n = n0 + n1;
  if (n <= 0) return 0.0;
  double h = 0.0;
  for (double c : {n0, n1}) {
    if (c > 0) {
      double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

struct Candidate {
  bool valid = false;
  double score = 0.0;
  TestKind test = TestKind::leaf;
  Attribute attribute = Attribute::age;
  double value = 0.0;
};

// Growth state shared across the recursion. Each attribute is pre-ranked once
// so a node can enumerate its distinct values by counting or sorting ranks.
class Grower {
 public:
  Grower(std::span<const PatientRecord> records, const TreeParams& params, std::uint64_t seed)
      : records_(records), params_(params), rng_(seed) {
    const std::size_t n = records.size();
    for (Attribute a : kAllAttributes) {
      auto& uniq = unique_[index(a)];
      uniq.reserve(n);
      for (const auto& r : records) uniq.push_back(r.value(a));
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      auto& rank = rank_[index(a)];
      rank.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        rank[i] = static_cast<std::uint32_t>(
            std::lower_bound(uniq.begin(), uniq.end(), records[i].value(a)) - uniq.begin());
      }
    }
    std::size_t widest = 0;
    for (const auto& u : unique_) widest = std::max(widest, u.size());
    hist0_.assign(widest, 0);
    hist1_.assign(widest, 0);
  }

  std::vector<TreeNode> grow() {
    std::vector<std::uint32_t> all(records_.size());
    std::iota(all.begin(), all.end(), std::uint32_t{0});
    grow_node(all, 0);
    return std::move(nodes_);
  }

 private:
  struct Run {
    std::uint32_t rank;
    std::uint64_t n0;
    std::uint64_t n1;
  };

  std::size_t grow_node(std::vector<std::uint32_t>& idx, std::size_t depth) {
    TreeNode node;
    for (auto i : idx) ++node.support[records_[i].cardio == 1 ? 1 : 0];
    const std::size_t at = nodes_.size();
    nodes_.push_back(node);

    const bool pure = node.support[0] == 0 || node.support[1] == 0;
    const bool too_small = idx.size() < 2 * params_.min_leaf;
    const bool too_deep = params_.max_depth != 0 && depth >= params_.max_depth;
    if (pure || too_small || too_deep) return at;

    Candidate best = best_split(idx, node.support);
    if (!best.valid) return at;

    std::vector<std::uint32_t> left, right;
    left.reserve(idx.size());
    right.reserve(idx.size());
    for (auto i : idx) {
      double v = records_[i].value(best.attribute);
      bool go_left = best.test == TestKind::threshold ? v <= best.value : v == best.value;
      (go_left ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    nodes_[at].test = best.test;
    nodes_[at].attribute = best.attribute;
    nodes_[at].value = best.value;
    auto l = grow_node(left, depth + 1);
    auto r = grow_node(right, depth + 1);
    nodes_[at].left = static_cast<std::int32_t>(l);
    nodes_[at].right = static_cast<std::int32_t>(r);
    return at;
  }

  std::vector<Attribute> candidate_attributes() {
    std::vector<Attribute> attrs(kAllAttributes.begin(), kAllAttributes.end());
    const std::size_t m = params_.features_per_split;
    if (m == 0 || m >= kAttributeCount) return attrs;
    // Partial Fisher-Yates; evaluate the draw in attribute order so ties
    // resolve the same way as in a full scan.
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + uniform_index(rng_, kAttributeCount - i);
      std::swap(attrs[i], attrs[j]);
    }
    attrs.resize(m);
    std::sort(attrs.begin(), attrs.end());
    return attrs;
  }

  Candidate best_split(const std::vector<std::uint32_t>& idx,
                       const std::array<std::uint64_t, 2>& support) {
    const double n = static_cast<double>(idx.size());
    const double parent = entropy(static_cast<double>(support[0]), static_cast<double>(support[1]));
    const std::uint64_t min_leaf = std::max<std::size_t>(params_.min_leaf, 1);

    Candidate best;
    auto consider = [&](std::uint64_t l0, std::uint64_t l1, TestKind test, Attribute a,
                        double value) {
      const std::uint64_t nl = l0 + l1;
      const std::uint64_t nr = idx.size() - nl;
      if (nl < min_leaf || nr < min_leaf) return;
      const double r0 = static_cast<double>(support[0] - l0);
      const double r1 = static_cast<double>(support[1] - l1);
      const double wl = static_cast<double>(nl) / n;
      const double wr = static_cast<double>(nr) / n;
      double gain = parent - wl * entropy(static_cast<double>(l0), static_cast<double>(l1)) -
                    wr * entropy(r0, r1);
      if (gain <= 1e-12) return;
      double score = gain;
      if (params_.use_gain_ratio) {
        double split_info = entropy(static_cast<double>(nl), static_cast<double>(nr));
        if (split_info <= 0) return;
        score = gain / split_info;
      }
      if (!best.valid || score > best.score) best = {true, score, test, a, value};
    };

    for (Attribute a : candidate_attributes()) {
      const auto& uniq = unique_[index(a)];
      const auto runs = value_runs(idx, a);
      if (runs.size() < 2) continue;
      if (kind(a) == AttributeKind::categorical) {
        for (const auto& run : runs)
          consider(run.n0, run.n1, TestKind::equals, a, uniq[run.rank]);
        continue;
      }
      std::uint64_t l0 = 0, l1 = 0;
      for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        l0 += runs[i].n0;
        l1 += runs[i].n1;
        const double lo = uniq[runs[i].rank];
        const double hi = uniq[runs[i + 1].rank];
        double threshold = lo;
        if (kind(a) == AttributeKind::numeric) {
          threshold = lo + (hi - lo) / 2.0;
          if (!(threshold < hi)) threshold = lo;
        }
        consider(l0, l1, TestKind::threshold, a, threshold);
      }
    }
    return best;
  }

  // Distinct values of attribute `a` among `idx`, ascending, with class counts.
  std::vector<Run> value_runs(const std::vector<std::uint32_t>& idx, Attribute a) {
    const auto& rank = rank_[index(a)];
    const std::size_t width = unique_[index(a)].size();
    std::vector<Run> runs;
    if (idx.size() * 16 < width) {
      std::vector<std::pair<std::uint32_t, int>> keyed;
      keyed.reserve(idx.size());
      for (auto i : idx) keyed.emplace_back(rank[i], records_[i].cardio == 1 ? 1 : 0);
      std::sort(keyed.begin(), keyed.end());
      for (const auto& [rk, cls] : keyed) {
        if (runs.empty() || runs.back().rank != rk) runs.push_back({rk, 0, 0});
        ++(cls ? runs.back().n1 : runs.back().n0);
      }
      return runs;
    }
    for (auto i : idx) ++(records_[i].cardio == 1 ? hist1_ : hist0_)[rank[i]];
    for (std::size_t rk = 0; rk < width; ++rk) {
      if (hist0_[rk] || hist1_[rk]) {
        runs.push_back({static_cast<std::uint32_t>(rk), hist0_[rk], hist1_[rk]});
        hist0_[rk] = hist1_[rk] = 0;
      }
    }
    return runs;
  }

  std::span<const PatientRecord> records_;
  const TreeParams& params_;
  Rng rng_;
  std::array<std::vector<double>, kAttributeCount> unique_;
  std::array<std::vector<std::uint32_t>, kAttributeCount> rank_;
  std::vector<std::uint64_t> hist0_, hist1_;
  std::vector<TreeNode> nodes_;
};

// Bottom-up subtree replacement. Returns the estimated error count of the
// (possibly collapsed) subtree rooted at `at`.
double prune_node(std::vector<TreeNode>& nodes, std::size_t at, double cf) {
  TreeNode& node = nodes[at];
  const double n = static_cast<double>(node.support[0] + node.support[1]);
  const double leaf_errors = static_cast<double>(std::min(node.support[0], node.support[1]));
  const double as_leaf = leaf_errors + pessimistic_extra_errors(n, leaf_errors, cf);
  if (node.is_leaf()) return as_leaf;
  const double as_tree = prune_node(nodes, static_cast<std::size_t>(node.left), cf) +
                         prune_node(nodes, static_cast<std::size_t>(node.right), cf);
  if (as_leaf <= as_tree + 0.1) {
    nodes[at].test = TestKind::leaf;
    nodes[at].left = nodes[at].right = -1;
    nodes[at].value = 0.0;
    nodes[at].attribute = Attribute::age;
    return as_leaf;
  }
  return as_tree;
}

// Re-lays out reachable nodes in preorder.
std::vector<TreeNode> compact(const std::vector<TreeNode>& nodes) {
  std::vector<TreeNode> out;
  out.reserve(nodes.size());
  auto visit = [&](auto&& self, std::size_t at) -> std::int32_t {
    auto pos = static_cast<std::int32_t>(out.size());
    out.push_back(nodes[at]);
    if (!nodes[at].is_leaf()) {
      auto l = self(self, static_cast<std::size_t>(nodes[at].left));
      auto r = self(self, static_cast<std::size_t>(nodes[at].right));
      out[static_cast<std::size_t>(pos)].left = l;
      out[static_cast<std::size_t>(pos)].right = r;
    }
    return pos;
  };
  visit(visit, 0);
  return out;
}

}  // namespace

double pessimistic_extra_errors(double n, double errors, double cf) {
  if (cf > 0.5 || n <= 0) return 0.0;
  if (errors < 1) {
    const double base = n * (1 - std::pow(cf, 1 / n));
    if (errors == 0) return base;
    return base + errors * (pessimistic_extra_errors(n, 1, cf) - base);
  }
  if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
  const double z = boost::math::quantile(boost::math::normal(), 1 - cf);
  const double f = (errors + 0.5) / n;
  const double r =
      (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) /
      (1 + z * z / n);
  return r * n - errors;
}

DecisionTree::DecisionTree() : nodes_(1) {}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error("decision tree has no nodes");
  // Every node must be reached exactly once from the root; internal nodes
  // have two children with larger indices.
  std::vector<int> reached(nodes_.size(), 0);
  reached[0] = 1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& nd = nodes_[i];
    if (nd.is_leaf()) {
      if (nd.left != -1 || nd.right != -1) throw Error("leaf node with children");
      continue;
    }
    for (auto c : {nd.left, nd.right}) {
      if (c <= static_cast<std::int32_t>(i) || c >= static_cast<std::int32_t>(nodes_.size()))
        throw Error("decision tree child index out of range at node " + std::to_string(i));
      if (++reached[static_cast<std::size_t>(c)] > 1)
        throw Error("decision tree node " + std::to_string(c) + " has two parents");
    }
  }
  if (std::find(reached.begin(), reached.end(), 0) != reached.end())
    throw Error("decision tree has unreachable nodes");
}

DecisionTree DecisionTree::fit(std::span<const PatientRecord> records, const TreeParams& params,
                               std::uint64_t seed) {
  if (records.empty()) throw TrainingError("cannot train a decision tree on an empty set");
  Grower grower(records, params, seed);
  auto nodes = grower.grow();
  if (params.prune) {
    prune_node(nodes, 0, params.confidence);
    nodes = compact(nodes);
  }
  return DecisionTree(std::move(nodes));
}

std::size_t DecisionTree::leaf_for(const PatientRecord& r) const {
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const auto& nd = nodes_[at];
    double v = r.value(nd.attribute);
    bool left = nd.test == TestKind::threshold ? v <= nd.value : v == nd.value;
    at = static_cast<std::size_t>(left ? nd.left : nd.right);
  }
  return at;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

// Text form, one node per line in preorder:
//   tree <node-count>
//   split <attribute> le|eq <value> <n0> <n1>
//   leaf <n0> <n1>
void DecisionTree::write(std::ostream& out) const {
  out << "tree " << nodes_.size() << '\n';
  for (const auto& nd : nodes_) {
    if (nd.is_leaf()) {
      out << "leaf " << nd.support[0] << ' ' << nd.support[1] << '\n';
    } else {
      out << "split " << name(nd.attribute) << ' '
          << (nd.test == TestKind::threshold ? "le" : "eq") << ' ' << text::decimal(nd.value)
          << ' ' << nd.support[0] << ' ' << nd.support[1] << '\n';
    }
  }
}

DecisionTree DecisionTree::read(std::istream& in) {
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != "tree" || count == 0)
    throw Error("expected 'tree <node-count>'");
  std::vector<TreeNode> nodes(count);
  for (auto& nd : nodes) {
    if (!(in >> word)) throw Error("truncated tree");
    if (word == "split") {
      std::string attr, op, value;
      in >> attr >> op >> value;
      auto a = attribute_from_name(attr);
      auto v = text::parse_decimal(value);
      if (!a || !v || (op != "le" && op != "eq")) throw Error("malformed split line");
      nd.attribute = *a;
      nd.test = op == "le" ? TestKind::threshold : TestKind::equals;
      nd.value = *v;
    } else if (word != "leaf") {
      throw Error("unexpected tree token '" + word + "'");
    }
    if (!(in >> nd.support[0] >> nd.support[1])) throw Error("malformed node support");
  }
  // Preorder layout: rebuild child links with a stack of open internal nodes.
  std::vector<std::size_t> open;
  std::vector<int> filled(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) {
      if (open.empty()) throw Error("tree has more nodes than its shape allows");
      auto parent = open.back();
      if (filled[parent]++ == 0) {
        nodes[parent].left = static_cast<std::int32_t>(i);
      } else {
        nodes[parent].right = static_cast<std::int32_t>(i);
        open.pop_back();
      }
    }
    if (!nodes[i].is_leaf()) open.push_back(i);
  }
  if (!open.empty()) throw Error("tree is missing nodes");
  return DecisionTree(std::move(nodes));
}

std::string DecisionTree::to_text() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::string DecisionTree::fingerprint() const { return text::hex64(text::fnv1a(to_text())); }

}  // namespace cardio
