#pragma once

#include <string>

#include "tilenas/config.hpp"

namespace tilenas {

// Subcommand entry points; each returns a process exit code and writes its
// artifacts under `out_dir` (created if missing). Diagnostics go to stderr.

// Full single-network pipeline: tiling.txt, graph.dot, schedule.csv,
// latency.txt, trace.csv.
int cmd_analyze(const RunConfig& config, const std::string& out_dir);

// Search run: trace.csv, best.txt, summary.txt.
int cmd_search(const RunConfig& config, const std::string& out_dir, int parallel = 1);

// graph.dot only.
int cmd_export_graph(const RunConfig& config, const std::string& out_dir);

// Schedule replay: schedule.csv, trace.csv, summary.txt.
int cmd_simulate(const RunConfig& config, const std::string& out_dir);

}  // namespace tilenas
