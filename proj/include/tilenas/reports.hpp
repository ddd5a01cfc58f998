#pragma once

#include <string>

#include "tilenas/analyzer.hpp"
#include "tilenas/design.hpp"
#include "tilenas/search.hpp"

namespace tilenas {

// Text/CSV emitters. Schemas are documented in docs/formats.md; every CSV
// starts with a "# schema: ..." line followed by the column header.

std::string tiling_report(const ChildNetwork& net, const TilingDesign& design);

std::string schedule_csv(const Schedule& schedule);

std::string simulation_trace_csv(const SimulationTrace& trace);

// Flat key-value record: analytical decomposition plus simulated makespans.
std::string latency_report(const LatencyReport& analytical, const SimulationTrace& sched_trace,
                           const SimulationTrace& fixed_trace, const PlatformSpec& platform);

std::string search_trace_csv(const std::vector<SearchTraceEntry>& trace);

std::string best_network_report(const SearchResult& result, const PlatformSpec& platform);

std::string search_summary(const SearchResult& result);

void write_file(const std::string& path, const std::string& content);

}  // namespace tilenas
