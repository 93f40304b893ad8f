#include "cardio/tree2rules.hpp"

#include <algorithm>
#include <sstream>

#include "cardio/text.hpp"

namespace cardio {

std::string_view name(Diagnosis d) { return d == Diagnosis::presence ? "presence" : "absence"; }

std::optional<Diagnosis> diagnosis_from_name(std::string_view s) {
  if (s == "presence") return Diagnosis::presence;
  if (s == "absence") return Diagnosis::absence;
  return std::nullopt;
}

bool SwrlRule::matches(const FeatureVector& x) const {
  return std::all_of(antecedent.begin(), antecedent.end(),
                     [&](const RuleAtom& a) { return a.holds(x[index(a.attribute)]); });
}

namespace {

struct PathStep {
  Attribute attribute;
  TestKind test;
  double value;
  bool left;
};

class Extractor {
 public:
  explicit Extractor(const DecisionTree& tree) : nodes_(tree.nodes()) {}

  void walk(std::size_t at, std::vector<PathStep>& path, RuleSet& out) {
    const TreeNode& node = nodes_[at];
    if (node.is_leaf()) {
      emit(at, path, out);
      return;
    }
    path.push_back({node.attribute, node.test, node.value, true});
    walk(static_cast<std::size_t>(node.left), path, out);
    path.back().left = false;
    walk(static_cast<std::size_t>(node.right), path, out);
    path.pop_back();
  }

 private:
  // Slot in the antecedent: either a fixed atom or a categorical attribute
  // whose admissible values are expanded at emission.
  struct Slot {
    std::optional<RuleAtom> atom;
    Attribute attribute = Attribute::age;
  };

  void emit(std::size_t leaf, const std::vector<PathStep>& path, RuleSet& out) {
    std::vector<Slot> slots;
    std::array<std::vector<double>, kAttributeCount> admissible;
    std::array<bool, kAttributeCount> touched{};
    for (const auto& step : path) {
      if (step.test == TestKind::threshold) {
        Slot s;
        s.atom = RuleAtom{step.attribute, step.left ? Comparator::le : Comparator::gt, step.value};
        slots.push_back(s);
        continue;
      }
      auto& allowed = admissible[index(step.attribute)];
      if (!touched[index(step.attribute)]) {
        touched[index(step.attribute)] = true;
        auto domain = info(step.attribute).domain;
        allowed.assign(domain.begin(), domain.end());
        slots.push_back(Slot{std::nullopt, step.attribute});
      }
      if (step.left) {
        bool present = std::find(allowed.begin(), allowed.end(), step.value) != allowed.end();
        allowed.clear();
        if (present) allowed.push_back(step.value);
      } else {
        allowed.erase(std::remove(allowed.begin(), allowed.end(), step.value), allowed.end());
      }
    }

    const Diagnosis consequent = to_diagnosis(nodes_[leaf].label());
    const RuleOrigin origin{leaf, nodes_[leaf].support};

    // Cartesian product over the categorical slots, last slot varying fastest.
    std::vector<std::size_t> categorical;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].atom) continue;
      if (admissible[index(slots[i].attribute)].empty()) return;  // unreachable leaf
      categorical.push_back(i);
    }
    std::vector<std::size_t> choice(slots.size(), 0);
    while (true) {
      SwrlRule rule;
      rule.consequent = consequent;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].atom) {
          rule.antecedent.push_back(*slots[i].atom);
        } else {
          const auto& allowed = admissible[index(slots[i].attribute)];
          rule.antecedent.push_back({slots[i].attribute, Comparator::eq, allowed[choice[i]]});
        }
      }
      out.rules.push_back(std::move(rule));
      out.origins.push_back(origin);

      auto pos = categorical.rbegin();
      for (; pos != categorical.rend(); ++pos) {
        if (++choice[*pos] < admissible[index(slots[*pos].attribute)].size()) break;
        choice[*pos] = 0;
      }
      if (pos == categorical.rend()) return;
    }
  }

  const std::vector<TreeNode>& nodes_;
};

}  // namespace

RuleSet extract_rules(const DecisionTree& tree) {
  RuleSet out;
  out.default_class = to_diagnosis(tree.majority_class());
  out.source = tree.fingerprint();
  Extractor extractor(tree);
  std::vector<PathStep> path;
  extractor.walk(0, path, out);
  return out;
}

RuleDecision evaluate_rules(const RuleSet& rules, const FeatureVector& x) {
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    if (rules.rules[i].matches(x)) return {rules.rules[i].consequent, false, i};
  }
  return {rules.default_class, true, std::nullopt};
}

RuleDecision classify_with_rules(const RuleSet& rules, const PatientRecord& r) {
  return evaluate_rules(rules, r.features());
}

std::string to_listing(const RuleSet& rules) {
  std::ostringstream os;
  for (const auto& rule : rules.rules) {
    os << "IF ";
    if (rule.antecedent.empty()) os << "TRUE";
    for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
      const auto& a = rule.antecedent[i];
      if (i) os << " AND ";
      os << name(a.attribute) << ' '
         << (a.comparator == Comparator::eq ? "=" : a.comparator == Comparator::le ? "<=" : ">")
         << ' ' << text::decimal(a.value);
    }
    os << " THEN " << name(rule.consequent) << '\n';
  }
  return os.str();
}

}  // namespace cardio
