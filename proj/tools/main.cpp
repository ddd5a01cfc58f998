#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "tilenas/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tilenas - implementation-aware architecture search for tiled CNN pipelines"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int parallel = 1;
  std::optional<uint64_t> seed_override;
  std::optional<std::string> strategy_override;

  auto add_common = [&](CLI::App* sub, bool with_search_flags) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    if (with_search_flags) {
      sub->add_option("--seed", seed_override, "override the config seed");
      sub->add_option("--parallel", parallel, "latency-evaluation threads (random strategy)");
      sub->add_option("--strategy", strategy_override, "override strategy")
          ->check(CLI::IsMember({"reinforce", "random"}));
    }
  };

  auto* analyze = app.add_subcommand("analyze", "analyze one explicit network");
  auto* search = app.add_subcommand("search", "run an architecture search");
  auto* export_graph = app.add_subcommand("export-graph", "emit the tile task graph");
  auto* simulate = app.add_subcommand("simulate", "replay the schedule in the simulator");
  add_common(analyze, false);
  add_common(search, true);
  add_common(export_graph, false);
  add_common(simulate, false);

  CLI11_PARSE(app, argc, argv);

  try {
    tilenas::RunConfig cfg = tilenas::load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (strategy_override)
      cfg.strategy = *strategy_override == "random" ? tilenas::Strategy::Random
                                                    : tilenas::Strategy::Reinforce;
    if (analyze->parsed()) return tilenas::cmd_analyze(cfg, out_dir);
    if (search->parsed()) return tilenas::cmd_search(cfg, out_dir, parallel);
    if (export_graph->parsed()) return tilenas::cmd_export_graph(cfg, out_dir);
    if (simulate->parsed()) return tilenas::cmd_simulate(cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
