#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cardio/error.hpp"
#include "commands.hpp"

namespace {

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cardio;
  CLI::App app{"cardio-onto: cardiovascular disease classifiers and an ontology rule pipeline"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string input, out = "out", delimiter = ";";
  std::string algorithms = "all", protocols;
  std::uint64_t seed = 1;
  std::size_t min_leaf = 0, max_depth = 0, k = 0, trees = 0;
  std::vector<std::string> overrides;
  bool unstratified = false;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "Input file");
    cmd->add_option("--delimiter", delimiter, "Field delimiter (one character)");
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", seed, "Seed for partitioning and learners")->capture_default_str();
  };
  auto learning = [&](CLI::App* cmd) {
    cmd->add_option("--protocols", protocols, "folds10,split60");
    cmd->add_option("--min-leaf", min_leaf, "Decision tree minimum records per leaf");
    cmd->add_option("--max-depth", max_depth, "Decision tree depth limit (0: none)");
    cmd->add_option("--k", k, "Neighbours for knn");
    cmd->add_option("--trees", trees, "Trees in the random forest");
    cmd->add_option("--param", overrides, "Hyperparameter override key=value (repeatable)");
    cmd->add_flag("--unstratified", unstratified, "Draw the 10 folds without class stratification");
  };

  auto* prepare = app.add_subcommand("prepare", "Deduplicate a dataset and summarise it");
  common(prepare);
  auto* run = app.add_subcommand("run", "Evaluate classifiers and write reports and the comparison table");
  common(run);
  learning(run);
  run->add_option("--algorithms", algorithms, "Comma list of dt,rf,lr,nb,knn,svm,mlp,ontology or all")
      ->capture_default_str();
  auto* ontology = app.add_subcommand("ontology", "Extract SWRL rules, build the ontology and infer");
  common(ontology);
  learning(ontology);
  auto* figures = app.add_subcommand("figures", "Draw one SVG bar chart per metric");
  common(figures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cardio-onto: error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (delimiter.size() != 1) throw Error("--delimiter must be a single character");
    config.input = input;
    config.out = out;
    config.delimiter = delimiter.front();
    config.seed = seed;
    config.stratified = !unstratified;
    config.params.seed = seed;
    for (const auto& o : overrides) {
      auto eq = o.find('=');
      if (eq == std::string::npos) throw Error("--param expects key=value, got '" + o + "'");
      config.params.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (min_leaf) config.params.tree.min_leaf = min_leaf;
    if (max_depth) config.params.tree.max_depth = max_depth;
    if (k) config.params.knn.k = k;
    if (trees) config.params.forest.trees = trees;
    config.params.check();

    if (prepare->parsed()) {
      cli::cmd_prepare(config, std::cout);
    } else if (run->parsed()) {
      config.methods = cli::parse_methods(algorithms);
      config.protocols = cli::parse_protocols(protocols.empty() ? "folds10,split60" : protocols);
      cli::cmd_run(config, std::cout);
    } else if (ontology->parsed()) {
      config.methods = {Method::ontology};
      config.protocols = cli::parse_protocols(protocols.empty() ? "split60" : protocols);
      cli::cmd_ontology(config, std::cout);
    } else if (figures->parsed()) {
      cli::cmd_figures(config, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "cardio-onto: error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
