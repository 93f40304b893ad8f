#include "cardio/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cardio/error.hpp"
#include "cardio/text.hpp"

namespace cardio {

namespace {

constexpr std::string_view kReportHeader = "# cardio-onto evaluation report";
constexpr std::array<std::string_view, 4> kMetricNames = {"accuracy", "precision", "recall",
                                                          "f_measure"};

std::array<std::optional<Ratio>, 4> metric_values(const ConfusionMatrix& cm) {
  auto m = MetricSet::of(cm);
  return {m.accuracy, m.precision, m.recall, m.f_measure};
}

std::string cells(const ConfusionMatrix& cm) {
  return std::to_string(cm.tp) + ' ' + std::to_string(cm.fp) + ' ' + std::to_string(cm.fn) +
         ' ' + std::to_string(cm.tn);
}

std::uint64_t parse_count(std::string_view s, std::size_t line) {
  s = text::trim(s);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(line, 1, "expected a count, found '" + std::string(s) + "'");
  return v;
}

ConfusionMatrix parse_cells(std::string_view s, std::size_t line) {
  std::vector<std::string_view> parts;
  for (auto p : text::split(text::trim(s), ' '))
    if (!p.empty()) parts.push_back(p);
  if (parts.size() != 4) throw ParseError(line, 1, "expected four matrix cells 'tp fp fn tn'");
  return {parse_count(parts[0], line), parse_count(parts[1], line), parse_count(parts[2], line),
          parse_count(parts[3], line)};
}

}  // namespace

std::string report_file_name(Method m, Protocol p) {
  return "report_" + std::string(name(m)) + "_" + std::string(name(p)) + ".txt";
}

void write_report(const EvaluationReport& r, const RunInfo& run, std::ostream& out) {
  out << kReportHeader << '\n'
      << "method: " << name(r.method) << '\n'
      << "protocol: " << name(r.protocol) << '\n'
      << "records: " << r.records << '\n'
      << "seed: " << r.seed << '\n'
      << "hyperparameters: " << r.hyperparameters << '\n'
      << "input: " << r.input_fingerprint << '\n';
  for (const auto& [k, v] : run) out << "run." << k << ": " << v << '\n';
  out << "tp: " << r.cm.tp << '\n'
      << "fp: " << r.cm.fp << '\n'
      << "fn: " << r.cm.fn << '\n'
      << "tn: " << r.cm.tn << '\n';
  const auto values = metric_values(r.cm);
  for (std::size_t i = 0; i < 4; ++i) {
    out << kMetricNames[i] << ": " << display(values[i]);
    if (values[i]) out << " (" << values[i]->num << '/' << values[i]->den << ')';
    out << '\n';
  }
  out << "folds: " << r.folds.size() << '\n';
  for (std::size_t f = 0; f < r.folds.size(); ++f)
    out << "fold." << f + 1 << ": " << cells(r.folds[f]) << '\n';
  if (r.ontology) {
    const auto& o = *r.ontology;
    out << "ontology.rules: " << o.rules << '\n'
        << "ontology.leaves: " << o.leaves << '\n'
        << "ontology.individuals: " << o.individuals << '\n'
        << "ontology.presence: " << o.presence << '\n'
        << "ontology.absence: " << o.absence << '\n'
        << "ontology.fallback: " << o.fallback << '\n'
        << "ontology.overlapping: " << o.overlapping << '\n'
        << "ontology.tree: " << cells(o.tree) << '\n';
  }
  out << "wall_seconds: " << text::decimal(r.wall_seconds) << '\n';
}

EvaluationReport read_report(std::istream& in, RunInfo* run) {
  EvaluationReport r;
  std::map<std::string, std::string> metric_lines;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_folds = 0;
  bool saw_method = false, saw_protocol = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, 1, "expected 'key: value'");
    std::string key(text::trim(body.substr(0, colon)));
    std::string_view value = text::trim(body.substr(colon + 1));

    if (key == "method") {
      auto m = method_from_name(value);
      if (!m) throw ParseError(line_no, colon + 3, "unknown method '" + std::string(value) + "'");
      r.method = *m;
      saw_method = true;
    } else if (key == "protocol") {
      auto p = protocol_from_name(value);
      if (!p) throw ParseError(line_no, colon + 3, "unknown protocol '" + std::string(value) + "'");
      r.protocol = *p;
      saw_protocol = true;
    } else if (key == "records") {
      r.records = parse_count(value, line_no);
    } else if (key == "seed") {
      r.seed = parse_count(value, line_no);
    } else if (key == "hyperparameters") {
      r.hyperparameters = std::string(value);
    } else if (key == "input") {
      r.input_fingerprint = std::string(value);
    } else if (key.starts_with("run.")) {
      if (run) run->emplace_back(key.substr(4), std::string(value));
    } else if (key == "tp") {
      r.cm.tp = parse_count(value, line_no);
    } else if (key == "fp") {
      r.cm.fp = parse_count(value, line_no);
    } else if (key == "fn") {
      r.cm.fn = parse_count(value, line_no);
    } else if (key == "tn") {
      r.cm.tn = parse_count(value, line_no);
    } else if (std::find(kMetricNames.begin(), kMetricNames.end(), key) != kMetricNames.end()) {
      metric_lines[key] = std::string(value.substr(0, value.find(' ')));
    } else if (key == "folds") {
      declared_folds = parse_count(value, line_no);
    } else if (key.starts_with("fold.")) {
      if (parse_count(key.substr(5), line_no) != r.folds.size() + 1)
        throw ParseError(line_no, 1, "fold lines out of order");
      r.folds.push_back(parse_cells(value, line_no));
    } else if (key.starts_with("ontology.")) {
      auto& o = r.ontology ? *r.ontology : r.ontology.emplace();
      auto stat = key.substr(9);
      if (stat == "tree") o.tree = parse_cells(value, line_no);
      else if (stat == "rules") o.rules = parse_count(value, line_no);
      else if (stat == "leaves") o.leaves = parse_count(value, line_no);
      else if (stat == "individuals") o.individuals = parse_count(value, line_no);
      else if (stat == "presence") o.presence = parse_count(value, line_no);
      else if (stat == "absence") o.absence = parse_count(value, line_no);
      else if (stat == "fallback") o.fallback = parse_count(value, line_no);
      else if (stat == "overlapping") o.overlapping = parse_count(value, line_no);
      else throw ParseError(line_no, 1, "unknown key '" + key + "'");
    } else if (key == "wall_seconds") {
      auto v = text::parse_decimal(value);
      if (!v) throw ParseError(line_no, colon + 3, "expected seconds");
      r.wall_seconds = *v;
    } else {
      throw ParseError(line_no, 1, "unknown key '" + key + "'");
    }
  }
  if (!saw_method || !saw_protocol) throw Error("report lacks a method or protocol line");
  if (declared_folds != r.folds.size())
    throw Error("report declares " + std::to_string(declared_folds) + " folds but lists " +
                std::to_string(r.folds.size()));
  const auto values = metric_values(r.cm);
  for (std::size_t i = 0; i < 4; ++i) {
    auto it = metric_lines.find(std::string(kMetricNames[i]));
    if (it != metric_lines.end() && it->second != display(values[i]))
      throw Error("report " + std::string(kMetricNames[i]) + " " + it->second +
                  " does not match its confusion matrix (" + display(values[i]) + ")");
  }
  return r;
}

ComparisonTable compare(std::span<const EvaluationReport> reports, const RunInfo& run) {
  if (reports.empty()) throw Error("compare: no reports");
  std::map<Method, ComparisonRow> rows;
  for (const auto& r : reports) {
    auto& row = rows[r.method];
    row.method = r.method;
    auto& slot = r.protocol == Protocol::folds10 ? row.folds10 : row.split60;
    if (slot)
      throw Error("compare: two " + std::string(name(r.protocol)) + " reports for " +
                  std::string(name(r.method)));
    slot = r.cm;
  }
  ComparisonTable table;
  table.run = run;
  for (auto& [m, row] : rows) table.rows.push_back(row);

  auto acc = [](const std::optional<ConfusionMatrix>& cm) -> std::optional<Ratio> {
    return cm ? accuracy(*cm) : std::nullopt;
  };
  // nullopt sorts before any value.
  auto less = [](const std::optional<Ratio>& a, const std::optional<Ratio>& b) {
    if (!a || !b) return !a && b;
    return *a < *b;
  };
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [&](const ComparisonRow& a, const ComparisonRow& b) {
                     auto af = acc(a.folds10), bf = acc(b.folds10);
                     if (less(af, bf)) return true;
                     if (less(bf, af)) return false;
                     auto as = acc(a.split60), bs = acc(b.split60);
                     if (less(as, bs)) return true;
                     if (less(bs, as)) return false;
                     return name(a.method) < name(b.method);
                   });
  return table;
}

std::string to_markdown(const ComparisonTable& table) {
  static constexpr std::array<std::string_view, 4> titles = {"Accuracy", "Precision", "Recall",
                                                             "F-Measure"};
  std::ostringstream os;
  os << "| Classifier |";
  for (auto t : titles)
    for (Protocol p : kAllProtocols) os << ' ' << t << ' ' << label(p) << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < titles.size() * kAllProtocols.size(); ++i) os << "---:|";
  os << '\n';
  for (const auto& row : table.rows) {
    os << "| " << label(row.method) << " |";
    std::array<std::array<std::string, 4>, 2> cellsv;
    for (std::size_t p = 0; p < 2; ++p) {
      const auto& cm = row.at(kAllProtocols[p]);
      for (std::size_t i = 0; i < 4; ++i)
        cellsv[p][i] = cm ? display(metric_values(*cm)[i]) : "n/a";
    }
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t p = 0; p < 2; ++p) os << ' ' << cellsv[p][i] << " |";
    os << '\n';
  }
  if (!table.run.empty()) {
    os << "\nRun configuration:\n\n";
    for (const auto& [k, v] : table.run) os << "- " << k << ": " << v << '\n';
  }
  return os.str();
}

std::string to_csv(const ComparisonTable& table) {
  std::ostringstream os;
  for (const auto& [k, v] : table.run) os << "# " << k << ": " << v << '\n';
  os << "classifier";
  for (Protocol p : kAllProtocols) {
    for (auto c : {"tp", "fp", "fn", "tn"}) os << ',' << name(p) << '_' << c;
    for (auto m : kMetricNames) os << ',' << name(p) << '_' << m;
  }
  os << '\n';
  for (const auto& row : table.rows) {
    os << label(row.method);
    for (Protocol p : kAllProtocols) {
      const auto& cm = row.at(p);
      if (!cm) {
        os << ",,,,,,,,";
        continue;
      }
      os << ',' << cm->tp << ',' << cm->fp << ',' << cm->fn << ',' << cm->tn;
      for (const auto& v : metric_values(*cm))
        os << ',' << (v ? text::decimal(v->value()) : std::string("undefined"));
    }
    os << '\n';
  }
  return os.str();
}

ComparisonTable read_comparison_csv(std::istream& in) {
  ComparisonTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      auto kv = text::trim(body.substr(1));
      auto colon = kv.find(':');
      if (colon != std::string_view::npos)
        table.run.emplace_back(text::trim(kv.substr(0, colon)), text::trim(kv.substr(colon + 1)));
      continue;
    }
    auto fields = text::split(body, ',');
    if (!header) {
      if (fields.size() != 17 || fields[0] != "classifier")
        throw ParseError(line_no, 1, "not a comparison table header");
      header = true;
      continue;
    }
    if (fields.size() != 17) throw ParseError(line_no, 1, "expected 17 fields");
    auto m = method_from_name(text::trim(fields[0]));
    if (!m) throw ParseError(line_no, 1, "unknown classifier '" + std::string(fields[0]) + "'");
    ComparisonRow row;
    row.method = *m;
    for (std::size_t p = 0; p < 2; ++p) {
      const std::size_t base = 1 + 8 * p;
      if (text::trim(fields[base]).empty()) continue;
      ConfusionMatrix cm{parse_count(fields[base], line_no), parse_count(fields[base + 1], line_no),
                         parse_count(fields[base + 2], line_no),
                         parse_count(fields[base + 3], line_no)};
      (p == 0 ? row.folds10 : row.split60) = cm;
    }
    table.rows.push_back(row);
  }
  if (!header) throw Error("comparison table is empty");
  return table;
}

ComparisonTable read_comparison_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open comparison table " + path.string());
  return read_comparison_csv(in);
}

}  // namespace cardio
