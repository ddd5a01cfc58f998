#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilenas/graph.hpp"
#include "tilenas/sched.hpp"

namespace tilenas {

// Closed-form latency decomposition: per-PE processing time plus the chain of
// start-time offsets between consecutive PEs.
struct LatencyReport {
  std::vector<int64_t> pt_per_pe;       // PT_i, cycles
  std::vector<int64_t> delta_cycles;    // start offset of PE i vs PE i-1 ([0] = 0)
  std::vector<char> delta_kind;         // 'o' ofm-flavored, 'i' ifm-flavored, '-' none
  int64_t lat_sys_cycles = 0;
  double latency_ms = 0.0;
};

// PT_i = ET_i * (task count on PE i), task count including channel and spatial
// tile factors.
int64_t processing_time(const TileTaskGraph& graph, int layer);

// Start offset when the producing PE (layer-1) uses OFM reuse: the producer
// finishes one OFM tile per ceil(N/tn) tasks and the consumer's first input
// tile needs `ratio` of them.
int64_t start_delay_ofm(const TileTaskGraph& graph, int layer);

// Start offset when the producing PE uses IFM reuse: every producer input tile
// except the last must be fully consumed before the first OFM tile completes.
int64_t start_delay_ifm(const TileTaskGraph& graph, int layer);

// Lower-bound system latency: sum of start offsets (ofm-flavored for even PEs,
// ifm-flavored for odd PEs >= 3, matching the alternating reuse policy) plus the
// last PE's processing time.
LatencyReport analytical_latency(const TileTaskGraph& graph, const PlatformSpec& platform);

struct TaskRecord {
  TaskRef task;
  int pe = 1;
  int64_t start = 0;
  int64_t end = 0;
};

struct SimulationTrace {
  std::vector<TaskRecord> records;       // in dispatch order
  int64_t makespan_cycles = 0;
  std::vector<int64_t> stall_per_pe;     // idle cycles between a PE's first start and last end
  std::vector<int64_t> first_start_per_pe;  // -1 when the PE never ran
  std::vector<int64_t> busy_per_pe;
};

class DeadlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimOptions {
  // When true a PE blocked on its next planned task may run the earliest later
  // planned task whose input is ready; skipped tasks keep their priority.
  // When false the PE issues strictly in planned order and stalls.
  bool ready_queue = true;
};

// Event-driven replay of a schedule over the tile graph. Task duration is the
// layer's ET; dependencies are the graph's tile edges. Deterministic; throws
// DeadlockError when no progress is possible.
SimulationTrace simulate(const TileTaskGraph& graph, const Schedule& schedule,
                         SimOptions options = {});

}  // namespace tilenas
