#include "cardio/ontology.hpp"

#include <algorithm>
#include <unordered_set>

#include "cardio/error.hpp"

namespace cardio {

const OntologySchema& OntologySchema::standard() {
  static const OntologySchema schema = [] {
    OntologySchema s;
    s.classes = {"Patient", "Diagnostic", "presence", "absence"};
    s.subclass_of = {{"presence", "Diagnostic"}, {"absence", "Diagnostic"}};
    for (Attribute a : kAllAttributes) s.data_properties.emplace_back(name(a));
    s.data_properties.emplace_back(kTargetName);
    return s;
  }();
  return schema;
}

std::optional<Attribute> Individual::missing_predictor() const {
  for (Attribute a : kAllAttributes)
    if (!predictors[index(a)]) return a;
  return std::nullopt;
}

FeatureVector Individual::facts() const {
  FeatureVector x{};
  for (Attribute a : kAllAttributes) {
    const auto& v = predictors[index(a)];
    if (!v) throw Error("individual " + iri_suffix + " does not assert " + std::string(name(a)));
    x[index(a)] = *v;
  }
  return x;
}

void Ontology::add(Individual individual) {
  auto clash = std::find_if(individuals_.begin(), individuals_.end(), [&](const Individual& i) {
    return i.iri_suffix == individual.iri_suffix;
  });
  if (clash != individuals_.end())
    throw Error("duplicate individual '" + individual.iri_suffix + "'");
  individuals_.push_back(std::move(individual));
}

std::string individual_label(std::size_t i, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(5, std::to_string(count).size());
  std::string digits = std::to_string(i + 1);
  return "patient_" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

Ontology build_ontology(const Dataset& d) {
  Ontology onto;
  auto& out = onto.individuals();
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& r = d.records[i];
    Individual ind;
    ind.iri_suffix = individual_label(i, d.size());
    for (Attribute a : kAllAttributes) ind.predictors[index(a)] = r.value(a);
    ind.cardio = r.cardio;
    out.push_back(std::move(ind));
  }
  return onto;
}

InferenceReport infer(Ontology& ontology, const RuleSet& rules) {
  auto& individuals = ontology.individuals();

  std::array<bool, kAttributeCount> referenced{};
  for (const auto& rule : rules.rules)
    for (const auto& atom : rule.antecedent) referenced[index(atom.attribute)] = true;
  for (const auto& ind : individuals) {
    for (Attribute a : kAllAttributes) {
      if (referenced[index(a)] && !ind.predictors[index(a)])
        throw Error("rules reference " + std::string(name(a)) + ", which individual " +
                    ind.iri_suffix + " does not assert");
    }
  }

  InferenceReport report;
  report.individuals = individuals.size();
  for (auto& ind : individuals) {
    // Facts are the predictor assertions only; the target is not in view.
    FeatureVector facts{};
    for (Attribute a : kAllAttributes) facts[index(a)] = ind.predictors[index(a)].value_or(0.0);

    std::optional<Diagnosis> derived;
    std::size_t fired = 0;
    for (const auto& rule : rules.rules) {
      if (!rule.matches(facts)) continue;
      if (!derived) derived = rule.consequent;
      ++fired;
    }
    if (!derived) {
      derived = rules.default_class;
      ++report.fallback;
    }
    if (fired > 1) ++report.overlapping;
    ind.inferred_class = derived;
    ++(*derived == Diagnosis::presence ? report.presence : report.absence);
  }
  return report;
}

}  // namespace cardio
