#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cardio/attributes.hpp"
#include "cardio/data.hpp"
#include "cardio/decision_tree.hpp"

namespace cardio {

enum class Diagnosis : int { absence = 0, presence = 1 };

std::string_view name(Diagnosis d);
std::optional<Diagnosis> diagnosis_from_name(std::string_view s);
inline Diagnosis to_diagnosis(int cls) { return cls == 1 ? Diagnosis::presence : Diagnosis::absence; }
inline int to_class(Diagnosis d) { return static_cast<int>(d); }

enum class Comparator { eq, le, gt };

struct RuleAtom {
  Attribute attribute = Attribute::age;
  Comparator comparator = Comparator::le;
  double value = 0.0;

  bool holds(double x) const {
    switch (comparator) {
      case Comparator::eq: return x == value;
      case Comparator::le: return x <= value;
      case Comparator::gt: return x > value;
    }
    return false;
  }

  friend bool operator==(const RuleAtom&, const RuleAtom&) = default;
};

/// Conjunction of atoms over one patient variable. An empty antecedent is
/// the always-true rule.
struct SwrlRule {
  std::vector<RuleAtom> antecedent;
  Diagnosis consequent = Diagnosis::absence;
  std::string variable = "pt";

  bool matches(const FeatureVector& x) const;

  friend bool operator==(const SwrlRule&, const SwrlRule&) = default;
};

/// Where an extracted rule came from. A leaf below a categorical "not equal"
/// branch yields one rule per admissible value, so several rules may share a leaf.
struct RuleOrigin {
  std::size_t leaf = 0;  // node index in the source tree
  std::array<std::uint64_t, 2> support{0, 0};

  friend bool operator==(const RuleOrigin&, const RuleOrigin&) = default;
};

struct RuleSet {
  std::vector<SwrlRule> rules;
  Diagnosis default_class = Diagnosis::absence;
  std::string source;  // tree fingerprint, empty for hand-written sets
  std::vector<RuleOrigin> origins;  // parallel to rules when extracted; else empty

  /// Same rules, default and source; origins are bookkeeping and not compared.
  bool same_rules(const RuleSet& other) const {
    return rules == other.rules && default_class == other.default_class && source == other.source;
  }
};

/// One rule per root-to-leaf path (left threshold branch: LE, right: GT;
/// left equality branch: EQ; right equality branch: EQ over each remaining
/// domain value). Rules follow the leaves from left to right.
RuleSet extract_rules(const DecisionTree& tree);

struct RuleDecision {
  Diagnosis diagnosis = Diagnosis::absence;
  bool fallback = false;  // no rule matched; default_class used
  std::optional<std::size_t> rule;  // index of the rule that fired
};

/// First matching rule wins; default_class when none matches.
RuleDecision evaluate_rules(const RuleSet& rules, const FeatureVector& x);
RuleDecision classify_with_rules(const RuleSet& rules, const PatientRecord& r);

/// "IF cholesterol = 2 AND alco <= 0 THEN presence", one rule per line.
std::string to_listing(const RuleSet& rules);

}  // namespace cardio
