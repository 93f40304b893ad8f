#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cardio/error.hpp"
#include "cardio/ontology.hpp"
#include "cardio/svg.hpp"
#include "cardio/swrl.hpp"
#include "cardio/text.hpp"

namespace cardio::cli {

namespace fs = std::filesystem;

namespace {

std::string join_names(const auto& items) {
  std::string out;
  for (const auto& i : items) {
    if (!out.empty()) out += ',';
    out += name(i);
  }
  return out;
}

std::string comment_block(const RunInfo& info, std::string_view prefix = "# ") {
  std::string out;
  for (const auto& [k, v] : info) out += std::string(prefix) + k + ": " + v + '\n';
  return out;
}

std::string fold_dir(std::size_t fold) {
  std::ostringstream os;
  os << "fold_" << std::setw(2) << std::setfill('0') << fold + 1;
  return os.str();
}

Dataset load_input(const RunConfig& config) {
  if (config.input.empty()) throw Error("no --input given");
  return load_csv(config.input, config.delimiter);
}

}  // namespace

RunInfo RunConfig::info(const Dataset* data) const {
  RunInfo out;
  out.emplace_back("input", input.string());
  if (data) out.emplace_back("input_fingerprint", text::hex64(fingerprint(*data)));
  out.emplace_back("delimiter", std::string(1, delimiter));
  out.emplace_back("seed", std::to_string(seed));
  if (!methods.empty()) out.emplace_back("algorithms", join_names(methods));
  if (!protocols.empty()) {
    out.emplace_back("protocols", join_names(protocols));
    out.emplace_back("folds", stratified ? "stratified" : "unstratified");
  }
  out.emplace_back("hyperparameters", params.describe());
  return out;
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  for (auto item : text::split(list, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    if (item == "all") {
      for (Method m : kAllMethods)
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
      continue;
    }
    auto m = method_from_name(item);
    if (!m) throw Error("unknown algorithm '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw Error("no algorithms selected");
  return out;
}

std::vector<Protocol> parse_protocols(std::string_view list) {
  std::vector<Protocol> out;
  for (auto item : text::split(list, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    auto p = protocol_from_name(item);
    if (!p) throw Error("unknown protocol '" + std::string(item) + "' (expected folds10 or split60)");
    if (std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
  }
  if (out.empty()) throw Error("no protocols selected");
  return out;
}

void OutputSet::add(const fs::path& relative, std::string contents) {
  files_.emplace_back(relative, std::move(contents));
}

std::vector<fs::path> OutputSet::commit() {
  std::vector<fs::path> staged, written;
  try {
    for (const auto& [rel, contents] : files_) {
      const fs::path target = root_ / rel;
      fs::create_directories(target.parent_path());
      fs::path tmp = target;
      tmp += ".partial";
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error("cannot write " + tmp.string());
      out << contents;
      out.close();
      if (!out) throw Error("write failed: " + tmp.string());
      staged.push_back(tmp);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
    throw;
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const fs::path target = root_ / files_[i].first;
    fs::rename(staged[i], target);
    written.push_back(target);
  }
  files_.clear();
  return written;
}

void cmd_prepare(const RunConfig& config, std::ostream& log) {
  const Dataset raw = load_input(config);
  const Dataset clean = deduplicate(raw);
  const auto counts = clean.class_counts();

  std::ostringstream csv;
  write_csv(clean, csv, config.delimiter);

  RunConfig described = config;
  described.methods.clear();
  described.protocols.clear();
  std::ostringstream summary;
  summary << "# cardio-onto prepare summary\n"
          << comment_block(described.info(&raw), "run.")
          << "rows_loaded: " << raw.size() << '\n'
          << "duplicates_removed: " << raw.size() - clean.size() << '\n'
          << "rows_written: " << clean.size() << '\n'
          << "absence: " << counts[0] << '\n'
          << "presence: " << counts[1] << '\n'
          << "output: cardio_clean.csv\n"
          << "output_fingerprint: " << text::hex64(fingerprint(clean)) << '\n';

  OutputSet out(config.out);
  out.add("cardio_clean.csv", csv.str());
  out.add("prepare_summary.txt", summary.str());
  out.commit();
  log << "prepare: " << raw.size() << " rows -> " << clean.size() << " ("
      << raw.size() - clean.size() << " duplicates removed); absence " << counts[0]
      << ", presence " << counts[1] << '\n';
}

void cmd_run(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_input(config);
  const RunInfo info = config.info(&data);
  const std::string fp = text::hex64(fingerprint(data));

  std::vector<EvaluationReport> reports;
  for (Method m : config.methods) {
    for (Protocol p : config.protocols) {
      auto report = evaluate(m, p, data, config.seed, config.params, {}, config.stratified);
      report.input_fingerprint = fp;
      log << name(m) << ' ' << name(p) << ": accuracy " << display(report.metrics().accuracy)
          << " (" << std::fixed << std::setprecision(1) << report.wall_seconds << " s)\n"
          << std::defaultfloat;
      reports.push_back(std::move(report));
    }
  }

  const auto table = compare(reports, info);
  OutputSet out(config.out);
  for (const auto& r : reports) {
    std::ostringstream os;
    write_report(r, info, os);
    out.add(report_file_name(r.method, r.protocol), os.str());
  }
  out.add("comparison.md", to_markdown(table));
  out.add("comparison.csv", to_csv(table));
  out.commit();
  log << "wrote " << reports.size() << " reports and the comparison table to "
      << config.out.string() << '\n';
}

void cmd_ontology(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_input(config);
  RunConfig described = config;
  described.methods = {Method::ontology};
  const RunInfo info = described.info(&data);
  const std::string fp = text::hex64(fingerprint(data));

  OutputSet out(config.out);
  for (Protocol p : config.protocols) {
    const fs::path dir = name(p);
    std::ostringstream fold_lines;
    auto observer = [&](std::size_t fold, const Dataset&, const OntologyRun* run) {
      const fs::path sub = p == Protocol::folds10 ? dir / fold_dir(fold) : dir;
      out.add(sub / "rules.swrl", comment_block(info) + serialize_swrl(run->rules));
      out.add(sub / "ontology.ttl", comment_block(info) + export_turtle(run->ontology));
      const auto& inf = run->inference;
      fold_lines << "fold." << fold + 1 << ": individuals " << inf.individuals << " presence "
                 << inf.presence << " absence " << inf.absence << " fallback " << inf.fallback
                 << " rules " << run->rules.rules.size() << '\n';
    };
    auto report = evaluate(Method::ontology, p, data, config.seed, config.params, observer,
                           config.stratified);
    report.input_fingerprint = fp;
    const auto& stats = *report.ontology;

    std::ostringstream summary;
    summary << "# cardio-onto inference summary\n"
            << comment_block(info, "run.") << "protocol: " << name(p) << '\n'
            << "individuals: " << stats.individuals << '\n'
            << "presence: " << stats.presence << '\n'
            << "absence: " << stats.absence << '\n'
            << "fallback: " << stats.fallback << '\n'
            << "overlapping: " << stats.overlapping << '\n'
            << "rules: " << stats.rules << '\n'
            << "leaves: " << stats.leaves << '\n'
            << "matches_tree: " << (stats.tree == report.cm ? "yes" : "no") << '\n'
            << fold_lines.str();
    out.add(dir / "inference_summary.txt", summary.str());

    std::ostringstream rep;
    write_report(report, info, rep);
    out.add(dir / "report.txt", rep.str());
    log << "ontology " << name(p) << ": " << stats.individuals << " individuals, presence "
        << stats.presence << ", absence " << stats.absence << ", accuracy "
        << display(report.metrics().accuracy) << '\n';
  }
  out.commit();
}

void cmd_figures(const RunConfig& config, std::ostream& log) {
  const fs::path table_path = config.input.empty() ? config.out / "comparison.csv" : config.input;
  if (!fs::exists(table_path)) throw Error("comparison table not found: " + table_path.string());
  const auto table = read_comparison_csv(table_path);
  OutputSet out(config.out);
  for (Metric m : kAllMetrics) out.add(chart_file_name(m), bar_chart_svg(table, m));
  out.commit();
  log << "wrote " << kAllMetrics.size() << " charts (" << table.rows.size()
      << " classifiers) to " << config.out.string() << '\n';
}

}  // namespace cardio::cli
