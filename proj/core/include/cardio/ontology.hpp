#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cardio/attributes.hpp"
#include "cardio/data.hpp"
#include "cardio/tree2rules.hpp"

namespace cardio {

/// Classes and data properties of the patient ontology. `presence` and
/// `absence` are subclasses of `Diagnostic`; every data property has domain
/// Patient and range xsd:decimal.
struct OntologySchema {
  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::string>> subclass_of;  // (sub, super)
  std::vector<std::string> data_properties;  // the 11 predictors, then cardio

  static const OntologySchema& standard();
};

/// A patient individual of the A-box.
struct Individual {
  std::string iri_suffix;
  std::array<std::optional<double>, kAttributeCount> predictors{};
  /// Scoring label only; inference works on `facts()` and never sees it.
  std::optional<double> cardio;
  std::optional<Diagnosis> inferred_class;

  /// The predictor assertions, or the first unasserted attribute.
  std::optional<Attribute> missing_predictor() const;
  FeatureVector facts() const;  // requires no missing predictor

  friend bool operator==(const Individual&, const Individual&) = default;
};

class Ontology {
 public:
  Ontology() = default;

  const OntologySchema& schema() const { return OntologySchema::standard(); }
  const std::vector<Individual>& individuals() const { return individuals_; }
  std::vector<Individual>& individuals() { return individuals_; }
  std::size_t size() const { return individuals_.size(); }

  /// Throws Error if the label is already used.
  void add(Individual individual);

 private:
  std::vector<Individual> individuals_;
};

/// Label of the i-th individual (0-based) in an ontology of `count` individuals:
/// `patient_00001` ..., zero-padded to at least five digits.
std::string individual_label(std::size_t i, std::size_t count);

/// One Individual per record, labelled in record order.
Ontology build_ontology(const Dataset& d);

struct InferenceReport {
  std::size_t individuals = 0;
  std::size_t presence = 0;
  std::size_t absence = 0;
  /// Individuals no rule matched (classified by the rule set's default).
  std::size_t fallback = 0;
  /// Individuals matched by more than one rule.
  std::size_t overlapping = 0;
};

/// Forward-chains `rules` over every individual and asserts the inferred
/// class. Fails before touching any individual if a rule refers to a
/// property some individual does not assert.
InferenceReport infer(Ontology& ontology, const RuleSet& rules);

/// Deterministic Turtle: prefixes, schema, then individuals sorted by label.
std::string export_turtle(const Ontology& ontology);

/// Reads the Turtle subset written by export_turtle (schema triples are
/// recognised and skipped; individuals, their data properties and inferred
/// classes are restored).
Ontology import_turtle(std::string_view turtle);

}  // namespace cardio
