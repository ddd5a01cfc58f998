#pragma once

// Independent test oracles. These deliberately re-derive expectations from
// first principles (brute force / element-level enumeration) and must not call
// the implementation paths they are used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "tilenas/analyzer.hpp"
#include "tilenas/arch.hpp"
#include "tilenas/design.hpp"
#include "tilenas/graph.hpp"
#include "tilenas/sched.hpp"

namespace oracles {

using namespace tilenas;

// Joint 4-loop enumeration of every feasible tiling tuple; ties prefer larger
// tn, then tm, then tr, then tc.
inline LayerTiling brute_force_tiling(const ConvLayer& l, int budget) {
  LayerTiling best;
  int64_t best_cycles = -1;
  for (int tn = 1; tn <= l.in_ch; ++tn)
    for (int tm = 1; tm <= l.out_ch; ++tm) {
      if (int64_t(tm) * tn > budget) continue;
      for (int tr = 1; tr <= l.rows; ++tr)
        for (int tc = 1; tc <= l.cols; ++tc) {
          int64_t et = int64_t(l.kh) * l.kw * tr * tc;
          int64_t cycles = et * ceil_div(l.in_ch, tn) * ceil_div(l.out_ch, tm) *
                           ceil_div(l.rows, tr) * ceil_div(l.cols, tc);
          auto cand = std::make_tuple(tn, tm, tr, tc);
          auto cur = std::make_tuple(best.tn, best.tm, best.tr, best.tc);
          if (best_cycles < 0 || cycles < best_cycles ||
              (cycles == best_cycles && cand > cur)) {
            best_cycles = cycles;
            best = {tm, tn, tr, tc, tm * tn, et};
          }
        }
    }
  return best;
}

inline int64_t brute_force_standalone_cycles(const ConvLayer& l, int budget) {
  LayerTiling t = brute_force_tiling(l, budget);
  return t.et_cycles * ceil_div(l.in_ch, t.tn) * ceil_div(l.out_ch, t.tm) *
         ceil_div(l.rows, t.tr) * ceil_div(l.cols, t.tc);
}

// Proportional split with largest-remainder rounding, no minimums or caps.
inline std::vector<int> largest_remainder_split(const std::vector<int64_t>& weights,
                                                int total) {
  int64_t sum = 0;
  for (auto w : weights) sum += w;
  std::vector<int> out(weights.size());
  std::vector<std::pair<int64_t, int>> rem;
  int given = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    int64_t num = int64_t(total) * weights[i];
    out[i] = int(num / sum);
    rem.push_back({num % sum, -int(i)});
    given += out[i];
  }
  std::sort(rem.begin(), rem.end(), std::greater<>());
  for (int r = 0; r < total - given; ++r) out[-rem[r].second]++;
  return out;
}

// Element-level data-flow projection between layer `p` (1-based) and p+1: every
// element of the intermediate feature map is mapped to the producer OFM tile
// that writes it and the consumer IFM tile that reads it; the resulting pairs
// are the expected cross-layer tile edges.
inline std::set<std::tuple<int, int, int>> element_level_edges(const ChildNetwork& net,
                                                              const TilingDesign& design,
                                                              int p) {
  const ConvLayer& prod = net.layers[p - 1];
  const LayerTiling& tp = design.per_layer[p - 1];
  const LayerTiling& tc = design.per_layer[p];
  int row_tiles = int(ceil_div(prod.rows, tp.tr));
  std::set<std::tuple<int, int, int>> edges;  // (k, j, m)
  for (int ch = 1; ch <= prod.out_ch; ++ch) {
    int k = (ch - 1) / tp.tm + 1;
    int j = (ch - 1) / tc.tn + 1;
    for (int r = 1; r <= prod.rows; ++r)
      for (int c = 1; c <= prod.cols; ++c) {
        int m = ((r - 1) / tp.tr) * int(ceil_div(prod.cols, tp.tc)) + (c - 1) / tp.tc + 1;
        (void)row_tiles;
        edges.insert({k, j, m});
      }
  }
  return edges;
}

// Topological-sort acyclicity check over the full tile/task node set.
inline bool graph_is_acyclic(const TileTaskGraph& g) {
  // node ids: per layer, ifm tiles then ofm tiles then tasks
  std::map<std::tuple<int, int, int, int>, int> ids;  // (layer, kind, a, b) kind 0=ifm,1=ofm,2=task(j,k*10000+m?)
  std::vector<std::vector<int>> adj;
  auto node = [&](int layer, int kind, int a, int b) {
    auto key = std::make_tuple(layer, kind, a, b);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = int(adj.size());
    ids[key] = id;
    adj.emplace_back();
    return id;
  };
  for (int i = 1; i <= g.num_layers(); ++i) {
    for (const auto& t : g.layer_tasks(i)) {
      int task = node(i, 2, t.j * 100000 + t.k, t.m);
      int ifm = node(i, 0, t.j, t.m);
      int ofm = node(i, 1, t.k, t.m);
      adj[ifm].push_back(task);
      adj[task].push_back(ofm);
    }
  }
  for (const auto& e : g.intra_edges) {
    int from = node(e.layer, 1, e.k, e.m);
    int to = node(e.layer + 1, 0, e.j, e.m);
    adj[from].push_back(to);
  }

  std::vector<int> indeg(adj.size(), 0);
  for (const auto& out : adj)
    for (int v : out) indeg[v]++;
  std::vector<int> stack;
  for (size_t v = 0; v < adj.size(); ++v)
    if (indeg[v] == 0) stack.push_back(int(v));
  size_t seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    seen++;
    for (int w : adj[v])
      if (--indeg[w] == 0) stack.push_back(w);
  }
  return seen == adj.size();
}

// Trace validity: per-PE non-overlap and dependency respect, re-deriving tile
// completion times from the trace itself.
inline bool trace_is_valid(const TileTaskGraph& g, const SimulationTrace& trace,
                           std::string* why = nullptr) {
  std::map<int, std::vector<std::pair<int64_t, int64_t>>> by_pe;
  for (const auto& r : trace.records) by_pe[r.pe].push_back({r.start, r.end});
  for (auto& [pe, spans] : by_pe) {
    std::sort(spans.begin(), spans.end());
    for (size_t i = 0; i + 1 < spans.size(); ++i)
      if (spans[i].second > spans[i + 1].first) {
        if (why) *why = "overlap on PE " + std::to_string(pe);
        return false;
      }
  }
  std::map<std::tuple<int, int, int>, int64_t> ofm_done;  // (layer,k,m) -> completion
  std::map<std::tuple<int, int, int>, int> ofm_count;
  for (const auto& r : trace.records) {
    auto key = std::make_tuple(r.task.layer, r.task.k, r.task.m);
    ofm_done[key] = std::max(ofm_done[key], r.end);
    ofm_count[key]++;
  }
  for (const auto& r : trace.records) {
    if (r.task.layer == 1) continue;
    auto [k_lo, k_hi] = g.producer_range(r.task.layer, r.task.j);
    for (int k = k_lo; k <= k_hi; ++k) {
      auto key = std::make_tuple(r.task.layer - 1, k, r.task.m);
      auto it = ofm_done.find(key);
      if (it == ofm_done.end() ||
          ofm_count[key] != g.counts[r.task.layer - 2].ifm_tiles || r.start < it->second) {
        if (why)
          *why = "task v(" + std::to_string(r.task.layer) + "," + std::to_string(r.task.j) +
                 ",...) started before its input tile was complete";
        return false;
      }
    }
  }
  return true;
}

// Schedule sanity: every task of each layer exactly once on its own PE.
inline bool schedule_is_permutation(const TileTaskGraph& g, const Schedule& s) {
  if (int(s.per_pe.size()) != g.num_layers()) return false;
  for (int i = 1; i <= g.num_layers(); ++i) {
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& t : s.per_pe[i - 1]) {
      if (t.layer != i) return false;
      if (!seen.insert({t.j, t.k, t.m}).second) return false;
    }
    if (int64_t(seen.size()) != g.tasks_in_layer(i)) return false;
  }
  return true;
}

// Reuse contiguity: on an OFM-reuse PE all tasks sharing (k, m) are contiguous;
// on an IFM-reuse PE all tasks sharing (j, m) are contiguous.
inline bool schedule_contiguity_holds(const Schedule& s) {
  for (size_t pe = 0; pe < s.per_pe.size(); ++pe) {
    std::set<std::pair<int, int>> closed;
    std::pair<int, int> current{-1, -1};
    for (const auto& t : s.per_pe[pe]) {
      std::pair<int, int> group = s.policy[pe] == Reuse::OfmReuse
                                      ? std::make_pair(t.k, t.m)
                                      : std::make_pair(t.j, t.m);
      if (group != current) {
        if (closed.count(group)) return false;  // group resumed after closing
        if (current.first != -1) closed.insert(current);
        current = group;
      }
    }
  }
  return true;
}

// Small random networks/designs for property tests. Channels stay small enough
// for the element-level oracle.
struct InstanceGen {
  std::mt19937_64 rng;
  explicit InstanceGen(uint64_t seed) : rng(seed) {}

  int uniform(int lo, int hi) { return lo + int(rng() % uint64_t(hi - lo + 1)); }

  ChildNetwork random_network(int max_layers = 6, int max_ch = 64) {
    int layers = uniform(1, max_layers);
    int rows = uniform(4, 12);
    int cols = uniform(4, 12);
    ChildNetwork net;
    int in_ch = uniform(1, max_ch);
    for (int i = 0; i < layers; ++i) {
      ConvLayer l;
      l.kh = l.kw = uniform(1, 5);
      l.in_ch = in_ch;
      l.out_ch = uniform(1, max_ch);
      l.rows = rows;
      l.cols = cols;
      net.layers.push_back(l);
      in_ch = l.out_ch;
    }
    return net;
  }

  PlatformSpec random_platform(const ChildNetwork& net) {
    PlatformSpec p;
    p.num_fpgas = uniform(1, 2);
    int need = int(net.layers.size());
    p.dsp_per_fpga = std::max(need, uniform(16, 256));
    p.clock_mhz = 100.0;
    p.rl_ms = 10.0;
    return p;
  }

  // Hand-built two-layer design with integer channel-tile ratio and aligned
  // spatial grids, independent of build_design.
  std::pair<ChildNetwork, TilingDesign> random_two_layer_ratio_case(int max_ch = 24) {
    ChildNetwork net;
    int rows = uniform(2, 8), cols = uniform(2, 8);
    int mid = uniform(1, max_ch);
    net.layers.push_back({uniform(1, 3), uniform(1, 3), uniform(1, max_ch), mid, rows, cols});
    net.layers.push_back({uniform(1, 3), uniform(1, 3), mid, uniform(1, max_ch), rows, cols});

    TilingDesign d;
    int tm1 = uniform(1, mid);
    int ratio = uniform(1, 4);
    int tn2 = std::min(tm1 * ratio, mid);
    tn2 = (tn2 / tm1) * tm1;  // keep the multiple exact after clamping
    int tr = uniform(1, rows), tcol = uniform(1, cols);
    auto mk = [&](const ConvLayer& l, int tm, int tn) {
      LayerTiling t;
      t.tm = tm;
      t.tn = tn;
      t.tr = tr;
      t.tc = tcol;
      t.dsp_used = tm * tn;
      t.et_cycles = int64_t(l.kh) * l.kw * tr * tcol;
      return t;
    };
    d.per_layer.push_back(mk(net.layers[0], tm1, uniform(1, net.layers[0].in_ch)));
    d.per_layer.push_back(mk(net.layers[1], uniform(1, net.layers[1].out_ch), tn2));
    d.pe_to_fpga = {0, 0};
    return {net, d};
  }
};

}  // namespace oracles
