#pragma once

#include <vector>

#include "tilenas/graph.hpp"

namespace tilenas {

enum class Reuse { OfmReuse, IfmReuse };

// Alternating reuse tags starting with OFM reuse on PE 1.
std::vector<Reuse> alternating_policy(int num_pes);

struct TileOrderEntry {
  int ch = 1;  // channel-tile index (j for IFM lists, k for OFM lists)
  int m = 1;   // spatial tile index

  bool operator==(const TileOrderEntry&) const = default;
};

// IFM tiles of one layer, channel index varying fastest, spatial index slowest.
std::vector<TileOrderEntry> order_ifm_tiles(const TileTaskGraph& graph, int layer);

// OFM tiles of one layer ordered by the position of the earliest next-layer IFM
// tile depending on them, ties by channel index. The last layer uses natural
// (k, m) order.
std::vector<TileOrderEntry> order_ofm_tiles(const TileTaskGraph& graph, int layer);

struct Schedule {
  // per_pe[i-1] is PE i's planned task order; PE i runs layer i's tasks.
  std::vector<std::vector<TaskRef>> per_pe;
  std::vector<Reuse> policy;
};

// Reuse-grouped schedule: an OFM-reuse PE keeps one output tile resident across
// consecutive tasks, an IFM-reuse PE keeps one input tile resident.
Schedule build_schedule(const TileTaskGraph& graph, const std::vector<Reuse>& policy);

// Prior-work baseline: rigid nested-loop issue order on every PE, spatial tile
// outermost, then OFM channel tile, then IFM channel tile innermost.
Schedule build_fixed_schedule(const TileTaskGraph& graph);

}  // namespace tilenas
