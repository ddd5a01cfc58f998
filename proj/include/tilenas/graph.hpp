#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tilenas/arch.hpp"
#include "tilenas/design.hpp"

namespace tilenas {

// Task v(layer, j, k, m): consumes IFM channel tile j, contributes to OFM
// channel tile k, at spatial tile m. All indices 1-based.
struct TaskRef {
  int layer = 1;
  int j = 1;
  int k = 1;
  int m = 1;

  bool operator==(const TaskRef&) const = default;
};

class GraphBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tile-level dependency graph of a tiled layer chain. Tiles and tasks are
// implicit in the per-layer counts; the cross-layer OFM->IFM tile edges are
// materialized since they are the non-trivial part.
struct TileTaskGraph {
  struct LayerCounts {
    int ifm_tiles = 1;  // ceil(N / tn)
    int ofm_tiles = 1;  // ceil(M / tm)
    int rc_tiles = 1;   // ceil(R / tr) * ceil(C / tc)
  };

  // OFM tile (layer, k, m) feeds IFM tile (layer + 1, j, m).
  struct IntraEdge {
    int layer = 1;
    int k = 1;
    int j = 1;
    int m = 1;

    bool operator==(const IntraEdge&) const = default;
  };

  ChildNetwork net;
  TilingDesign design;
  std::vector<LayerCounts> counts;
  std::vector<int> ratio;  // ratio[p-1] = tn(p+1) / tm(p), always integral
  std::vector<IntraEdge> intra_edges;

  int num_layers() const { return int(counts.size()); }
  int64_t et(int layer) const { return design.per_layer[layer - 1].et_cycles; }
  int64_t tasks_in_layer(int layer) const {
    const auto& c = counts[layer - 1];
    return int64_t(c.ifm_tiles) * c.ofm_tiles * c.rc_tiles;
  }
  int64_t total_tasks() const {
    int64_t n = 0;
    for (int i = 1; i <= num_layers(); ++i) n += tasks_in_layer(i);
    return n;
  }
  // Producer OFM channel-tile range feeding IFM tile j of `layer` (layer >= 2).
  std::pair<int, int> producer_range(int layer, int j) const {
    int rho = ratio[layer - 2];
    int k_hi = std::min(j * rho, counts[layer - 2].ofm_tiles);
    return {(j - 1) * rho + 1, k_hi};
  }
  // Tasks of one layer in deterministic (m, j, k) order.
  std::vector<TaskRef> layer_tasks(int layer) const;
};

// Builds the graph for a validated network + matching design. Rejects designs
// whose consumer tn is not an integer multiple of the producer tm, and designs
// whose spatial tile grids differ between consecutive layers.
TileTaskGraph build_graph(const ChildNetwork& net, const TilingDesign& design);

// Graphviz rendering: tile nodes, task nodes, inter- and intra-layer edges.
// Deterministic for a fixed graph.
std::string export_dot(const TileTaskGraph& graph);

}  // namespace tilenas
