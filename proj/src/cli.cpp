#include "tilenas/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "tilenas/analyzer.hpp"
#include "tilenas/reports.hpp"

namespace tilenas {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

const ChildNetwork& require_network(const RunConfig& cfg) {
  if (!cfg.network)
    throw ConfigError("this command needs an explicit [network] section");
  return *cfg.network;
}

}  // namespace

int cmd_analyze(const RunConfig& cfg, const std::string& out_dir) {
  try {
    const ChildNetwork& net = require_network(cfg);
    ensure_dir(out_dir);
    TilingDesign design = build_design(net, cfg.platform);
    TileTaskGraph graph = build_graph(net, design);
    Schedule sched = build_schedule(graph, alternating_policy(graph.num_layers()));
    Schedule fixed = build_fixed_schedule(graph);
    LatencyReport analytical = analytical_latency(graph, cfg.platform);
    SimulationTrace trace = simulate(graph, sched);
    SimulationTrace fixed_trace = simulate(graph, fixed, {.ready_queue = false});

    write_file(join(out_dir, "tiling.txt"), tiling_report(net, design));
    write_file(join(out_dir, "graph.dot"), export_dot(graph));
    write_file(join(out_dir, "schedule.csv"), schedule_csv(sched));
    write_file(join(out_dir, "latency.txt"),
               latency_report(analytical, trace, fixed_trace, cfg.platform));
    write_file(join(out_dir, "trace.csv"), simulation_trace_csv(trace));
    return 0;
  } catch (const InfeasibleDesign& e) {
    std::cerr << "analyze: infeasible design: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return 1;
  }
}

int cmd_search(const RunConfig& cfg, const std::string& out_dir, int parallel) {
  try {
    if (!cfg.space) throw ConfigError("search needs a [space] section");
    ensure_dir(out_dir);
    SearchOptions options = cfg.search_options();
    options.parallel = parallel;
    auto evaluator = make_evaluator(cfg);
    SearchResult result = run_search(*cfg.space, cfg.platform, options, *evaluator);
    write_file(join(out_dir, "trace.csv"), search_trace_csv(result.trace));
    write_file(join(out_dir, "best.txt"), best_network_report(result, cfg.platform));
    write_file(join(out_dir, "summary.txt"), search_summary(result));
    if (!result.best)
      std::cerr << "search: no feasible architecture found within the latency spec\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "search: " << e.what() << "\n";
    return 1;
  }
}

int cmd_export_graph(const RunConfig& cfg, const std::string& out_dir) {
  try {
    const ChildNetwork& net = require_network(cfg);
    ensure_dir(out_dir);
    TilingDesign design = build_design(net, cfg.platform);
    TileTaskGraph graph = build_graph(net, design);
    write_file(join(out_dir, "graph.dot"), export_dot(graph));
    return 0;
  } catch (const InfeasibleDesign& e) {
    std::cerr << "export-graph: infeasible design: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "export-graph: " << e.what() << "\n";
    return 1;
  }
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
  try {
    const ChildNetwork& net = require_network(cfg);
    ensure_dir(out_dir);
    TilingDesign design = build_design(net, cfg.platform);
    TileTaskGraph graph = build_graph(net, design);
    Schedule sched = build_schedule(graph, alternating_policy(graph.num_layers()));
    SimulationTrace trace = simulate(graph, sched);

    std::ostringstream summary;
    summary << "makespan_cycles = " << trace.makespan_cycles << "\n";
    for (size_t pe = 0; pe < trace.stall_per_pe.size(); ++pe)
      summary << "stall_pe" << pe + 1 << " = " << trace.stall_per_pe[pe] << "\n";

    write_file(join(out_dir, "schedule.csv"), schedule_csv(sched));
    write_file(join(out_dir, "trace.csv"), simulation_trace_csv(trace));
    write_file(join(out_dir, "summary.txt"), summary.str());
    return 0;
  } catch (const InfeasibleDesign& e) {
    std::cerr << "simulate: infeasible design: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tilenas
