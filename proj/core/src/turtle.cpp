#include <algorithm>
#include <sstream>
#include <string>
#include <utility>

#include "cardio/error.hpp"
#include "cardio/ontology.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

constexpr std::string_view kBase = "http://example.org/cardio-onto#";

std::string literal(double v) { return "\"" + text::decimal(v) + "\"^^xsd:decimal"; }

// Splits on `sep` outside double-quoted strings.
std::vector<std::string_view> split_outside_quotes(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::optional<double> parse_literal(std::string_view obj) {
  obj = text::trim(obj);
  if (obj.size() < 2 || obj.front() != '"') return std::nullopt;
  auto close = obj.find('"', 1);
  if (close == std::string_view::npos) return std::nullopt;
  auto rest = obj.substr(close + 1);
  if (!rest.empty() && rest != "^^xsd:decimal") return std::nullopt;
  return text::parse_decimal(obj.substr(1, close - 1));
}

}  // namespace

std::string export_turtle(const Ontology& ontology) {
  const auto& schema = ontology.schema();
  std::ostringstream os;
  os << "@prefix : <" << kBase << "> .\n"
     << "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
     << "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
     << "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
     << "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\n"
     << "<" << kBase.substr(0, kBase.size() - 1) << "> a owl:Ontology .\n\n";

  for (const auto& c : schema.classes) {
    os << ':' << c << " a owl:Class";
    for (const auto& [sub, super] : schema.subclass_of)
      if (sub == c) os << " ;\n    rdfs:subClassOf :" << super;
    os << " .\n";
  }
  os << '\n';
  for (const auto& p : schema.data_properties) {
    os << ':' << p << " a owl:DatatypeProperty ;\n"
       << "    rdfs:domain :Patient ;\n"
       << "    rdfs:range xsd:decimal .\n";
  }

  std::vector<const Individual*> sorted;
  sorted.reserve(ontology.size());
  for (const auto& ind : ontology.individuals()) sorted.push_back(&ind);
  std::sort(sorted.begin(), sorted.end(),
            [](const Individual* a, const Individual* b) { return a->iri_suffix < b->iri_suffix; });

  for (const Individual* ind : sorted) {
    os << "\n:" << ind->iri_suffix << " a owl:NamedIndividual , :Patient";
    if (ind->inferred_class) os << " , :" << name(*ind->inferred_class);
    for (Attribute a : kAllAttributes) {
      if (const auto& v = ind->predictors[index(a)])
        os << " ;\n    :" << name(a) << ' ' << literal(*v);
    }
    if (ind->cardio) os << " ;\n    :" << kTargetName << ' ' << literal(*ind->cardio);
    os << " .\n";
  }
  return os.str();
}

Ontology import_turtle(std::string_view turtle) {
  Ontology onto;
  // Statements end with " ." at end of line (as emitted); accumulate lines.
  std::string statement;
  std::size_t line_no = 0, statement_line = 0;
  auto flush = [&] {
    const std::string owned = std::exchange(statement, {});
    auto body = text::trim(owned);
    if (body.empty() || body.starts_with("@prefix")) return;
    body.remove_suffix(1);  // '.'
    auto first_space = body.find_first_of(" \t\n");
    if (first_space == std::string_view::npos)
      throw ParseError(statement_line, 1, "malformed statement");
    auto subject = body.substr(0, first_space);
    if (!subject.starts_with(":") || subject.size() < 2) return;  // ontology header etc.

    Individual ind;
    ind.iri_suffix = std::string(subject.substr(1));
    bool is_patient = false;
    for (auto pair : split_outside_quotes(body.substr(first_space), ';')) {
      pair = text::trim(pair);
      if (pair.empty()) continue;
      auto gap = pair.find_first_of(" \t\n");
      if (gap == std::string_view::npos)
        throw ParseError(statement_line, 1, "predicate without object in " + ind.iri_suffix);
      auto predicate = pair.substr(0, gap);
      auto objects = text::trim(pair.substr(gap));
      if (predicate == "a" || predicate == "rdf:type") {
        for (auto o : split_outside_quotes(objects, ',')) {
          o = text::trim(o);
          if (o == ":Patient") is_patient = true;
          if (o.starts_with(":"))
            if (auto d = diagnosis_from_name(o.substr(1))) ind.inferred_class = d;
        }
        continue;
      }
      if (!predicate.starts_with(":")) continue;  // rdfs:domain etc. on schema terms
      auto prop = predicate.substr(1);
      auto value = parse_literal(objects);
      if (!value)
        throw ParseError(statement_line, 1,
                         "expected a decimal literal for " + std::string(prop) + " of " +
                             ind.iri_suffix);
      if (prop == kTargetName) {
        ind.cardio = *value;
      } else if (auto a = attribute_from_name(prop)) {
        if (ind.predictors[index(*a)])
          throw ParseError(statement_line, 1,
                           std::string(prop) + " asserted twice for " + ind.iri_suffix);
        ind.predictors[index(*a)] = *value;
      } else {
        throw ParseError(statement_line, 1, "unknown property '" + std::string(prop) + "'");
      }
    }
    if (is_patient) onto.add(std::move(ind));
  };

  std::size_t start = 0;
  while (start <= turtle.size()) {
    auto end = turtle.find('\n', start);
    if (end == std::string_view::npos) end = turtle.size();
    auto line = turtle.substr(start, end - start);
    ++line_no;
    auto trimmed = text::trim(line);
    if (!trimmed.empty() && trimmed.front() != '#') {
      if (statement.empty()) statement_line = line_no;
      statement.append(line);
      statement.push_back('\n');
      if (trimmed.back() == '.') flush();
    }
    start = end + 1;
  }
  if (!text::trim(statement).empty())
    throw ParseError(statement_line, 1, "unterminated statement");
  return onto;
}

}  // namespace cardio
