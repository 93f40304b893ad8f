#include <doctest.h>

#include "cardio/decision_tree.hpp"
#include "cardio/error.hpp"
#include "cardio/ontology.hpp"
#include "synthetic.hpp"

using namespace cardio;

TEST_CASE("schema") {
  const auto& s = OntologySchema::standard();
  CHECK(s.classes == std::vector<std::string>{"Patient", "Diagnostic", "presence", "absence"});
  CHECK(s.data_properties.size() == kAttributeCount + 1);
  CHECK(s.data_properties.back() == "cardio");
  CHECK(s.subclass_of.size() == 2);
}

TEST_CASE("labels are one-based and zero-padded") {
  CHECK(individual_label(0, 10) == "patient_00001");
  CHECK(individual_label(69975, 69976) == "patient_69976");
  CHECK(individual_label(0, 123456) == "patient_000001");
}

TEST_CASE("build_ontology asserts every field") {
  auto d = testing::make_cohort(20, 1);
  auto onto = build_ontology(d);
  REQUIRE(onto.size() == 20);
  const auto& ind = onto.individuals()[3];
  CHECK(ind.iri_suffix == "patient_00004");
  CHECK(ind.facts() == d.records[3].features());
  CHECK(ind.cardio == d.records[3].cardio);
  CHECK_FALSE(ind.missing_predictor());
  CHECK_FALSE(ind.inferred_class);
  CHECK_THROWS_AS(onto.add(ind), Error);
}

TEST_CASE("inference classifies every individual without reading the label") {
  auto d = testing::make_cohort(1500, 2);
  auto tree = DecisionTree::fit(d, {});
  auto rules = extract_rules(tree);
  auto test = testing::make_cohort(700, 3);

  auto onto = build_ontology(test);
  auto report = infer(onto, rules);
  CHECK(report.individuals == 700);
  CHECK(report.presence + report.absence == 700);
  CHECK(report.fallback == 0);
  CHECK(report.overlapping == 0);
  for (std::size_t i = 0; i < test.size(); ++i)
    CHECK(to_class(*onto.individuals()[i].inferred_class) == tree.predict(test.records[i]));

  auto flipped = test;
  for (auto& r : flipped.records) r.cardio = 1 - r.cardio;
  auto onto2 = build_ontology(flipped);
  infer(onto2, rules);
  for (std::size_t i = 0; i < test.size(); ++i)
    CHECK(onto2.individuals()[i].inferred_class == onto.individuals()[i].inferred_class);
}

TEST_CASE("fallback and overlap are counted") {
  RuleSet rules;
  rules.default_class = Diagnosis::presence;
  SwrlRule high;
  high.antecedent = {{Attribute::ap_hi, Comparator::gt, 150}};
  high.consequent = Diagnosis::presence;
  SwrlRule very_high;
  very_high.antecedent = {{Attribute::ap_hi, Comparator::gt, 160}};
  very_high.consequent = Diagnosis::absence;
  rules.rules = {high, very_high};

  Dataset d;
  PatientRecord r;
  r.age = 18000;
  r.height = 165;
  r.weight = 70;
  for (int ap : {120, 155, 170}) {
    r.ap_hi = ap;
    d.records.push_back(r);
  }
  auto onto = build_ontology(d);
  auto rep = infer(onto, rules);
  CHECK(rep.fallback == 1);
  CHECK(rep.overlapping == 1);
  CHECK(rep.presence == 3);  // default, first rule, first of two matches
}

TEST_CASE("a missing referenced property fails before any inference") {
  auto onto = build_ontology(testing::make_cohort(5, 4));
  onto.individuals()[4].predictors[index(Attribute::ap_hi)].reset();
  RuleSet rules;
  SwrlRule rule;
  rule.antecedent = {{Attribute::ap_hi, Comparator::gt, 150}};
  rules.rules = {rule};
  CHECK_THROWS_AS(infer(onto, rules), Error);
  for (const auto& ind : onto.individuals()) CHECK_FALSE(ind.inferred_class);
  CHECK(onto.individuals()[4].missing_predictor() == Attribute::ap_hi);
  CHECK_THROWS_AS(onto.individuals()[4].facts(), Error);

  RuleSet unrelated;
  SwrlRule on_age;
  on_age.antecedent = {{Attribute::age, Comparator::gt, 1}};
  unrelated.rules = {on_age};
  CHECK(infer(onto, unrelated).individuals == 5);
}

TEST_CASE("Turtle export round-trips and is deterministic") {
  auto d = testing::make_cohort(40, 5);
  auto onto = build_ontology(d);
  auto tree = DecisionTree::fit(testing::make_cohort(500, 6), {});
  infer(onto, extract_rules(tree));
  const auto ttl = export_turtle(onto);
  CHECK(ttl == export_turtle(onto));
  CHECK(ttl.find(":presence a owl:Class ;\n    rdfs:subClassOf :Diagnostic .") != std::string::npos);
  CHECK(ttl.find(":patient_00001 a owl:NamedIndividual , :Patient") != std::string::npos);
  CHECK(ttl.find(":ap_hi a owl:DatatypeProperty") != std::string::npos);

  auto back = import_turtle(ttl);
  REQUIRE(back.size() == onto.size());
  for (std::size_t i = 0; i < onto.size(); ++i) CHECK(back.individuals()[i] == onto.individuals()[i]);
  CHECK(export_turtle(back) == ttl);
}

TEST_CASE("Turtle import rejects what it cannot represent") {
  CHECK_THROWS_AS(import_turtle(":p1 a :Patient ;\n    :bmi \"22\"^^xsd:decimal .\n"), ParseError);
  CHECK_THROWS_AS(import_turtle(":p1 a :Patient ;\n    :age \"old\"^^xsd:decimal .\n"), ParseError);
  CHECK_THROWS_AS(import_turtle(":p1 a :Patient ;\n    :age \"1\"^^xsd:decimal"), ParseError);
  CHECK_THROWS_AS(import_turtle(":p1 a :Patient .\n:p1 a :Patient .\n"), Error);
  auto partial = import_turtle(":p1 a :Patient ;\n    :age \"1\"^^xsd:decimal .\n");
  REQUIRE(partial.size() == 1);
  CHECK(partial.individuals()[0].missing_predictor() == Attribute::height);
}
