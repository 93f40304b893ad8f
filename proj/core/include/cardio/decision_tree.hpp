#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cardio/attributes.hpp"
#include "cardio/data.hpp"

namespace cardio {

struct TreeParams {
  std::size_t min_leaf = 2;
  std::size_t max_depth = 0;  // 0: unlimited
  bool use_gain_ratio = false;
  /// Pessimistic (upper-confidence-bound) subtree replacement after growth.
  bool prune = true;
  double confidence = 0.25;
  /// Attributes drawn at random per split; 0 or >= 11 considers all of them.
  std::size_t features_per_split = 0;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

enum class TestKind : std::uint8_t {
  leaf,
  threshold,  // value(attribute) <= value goes left
  equals,  // value(attribute) == value goes left
};

struct TreeNode {
  TestKind test = TestKind::leaf;
  Attribute attribute = Attribute::age;
  double value = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  /// Training records reaching this node, per class.
  std::array<std::uint64_t, 2> support{0, 0};

  bool is_leaf() const { return test == TestKind::leaf; }
  /// argmax of support, ties to class 0.
  int label() const { return support[1] > support[0] ? 1 : 0; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary classification tree. Nodes are stored in preorder with the root at
/// index 0, so leaves appear left to right in storage order.
class DecisionTree {
 public:
  DecisionTree();  // single leaf predicting class 0
  /// Adopts `nodes` after checking shape invariants; throws Error otherwise.
  explicit DecisionTree(std::vector<TreeNode> nodes);

  static DecisionTree fit(std::span<const PatientRecord> records, const TreeParams& params,
                          std::uint64_t seed = 1);
  static DecisionTree fit(const Dataset& d, const TreeParams& params, std::uint64_t seed = 1) {
    return fit(std::span<const PatientRecord>(d.records), params, seed);
  }

  int predict(const PatientRecord& r) const { return nodes_[leaf_for(r)].label(); }
  /// Index of the leaf reached by `r`.
  std::size_t leaf_for(const PatientRecord& r) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;
  int majority_class() const { return root().label(); }

  void write(std::ostream& out) const;
  static DecisionTree read(std::istream& in);
  std::string to_text() const;
  /// FNV-1a of to_text().
  std::string fingerprint() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Upper confidence limit on the number of errors beyond `errors` observed
/// among `n` cases, at confidence `cf` (the C4.5 pruning estimate).
double pessimistic_extra_errors(double n, double errors, double cf);

}  // namespace cardio
