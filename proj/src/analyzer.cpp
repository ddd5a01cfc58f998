#include "tilenas/analyzer.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace tilenas {

int64_t processing_time(const TileTaskGraph& g, int layer) {
  return g.et(layer) * g.tasks_in_layer(layer);
}

namespace {

// Producer OFM tiles needed by the first input tile of `layer`, clamped to the
// producer's tile count.
int effective_ratio(const TileTaskGraph& g, int layer) {
  return std::min(g.ratio[layer - 2], g.counts[layer - 2].ofm_tiles);
}

}  // namespace

int64_t start_delay_ofm(const TileTaskGraph& g, int layer) {
  if (layer < 2) throw std::invalid_argument("start_delay_ofm needs a producing layer");
  const auto& prod = g.counts[layer - 2];
  return int64_t(prod.ifm_tiles) * effective_ratio(g, layer) * g.et(layer - 1);
}

int64_t start_delay_ifm(const TileTaskGraph& g, int layer) {
  if (layer < 2) throw std::invalid_argument("start_delay_ifm needs a producing layer");
  const auto& prod = g.counts[layer - 2];
  return (int64_t(prod.ifm_tiles - 1) * prod.ofm_tiles + effective_ratio(g, layer)) *
         g.et(layer - 1);
}

LatencyReport analytical_latency(const TileTaskGraph& g, const PlatformSpec& platform) {
  const int n = g.num_layers();
  LatencyReport rep;
  rep.pt_per_pe.resize(n);
  rep.delta_cycles.assign(n, 0);
  rep.delta_kind.assign(n, '-');
  for (int i = 1; i <= n; ++i) rep.pt_per_pe[i - 1] = processing_time(g, i);
  int64_t start = 0;
  for (int i = 2; i <= n; ++i) {
    if (i % 2 == 0) {
      rep.delta_cycles[i - 1] = start_delay_ofm(g, i);
      rep.delta_kind[i - 1] = 'o';
    } else {
      rep.delta_cycles[i - 1] = start_delay_ifm(g, i);
      rep.delta_kind[i - 1] = 'i';
    }
    start += rep.delta_cycles[i - 1];
  }
  rep.lat_sys_cycles = start + rep.pt_per_pe[n - 1];
  rep.latency_ms = double(rep.lat_sys_cycles) / (platform.clock_mhz * 1e3);
  return rep;
}

namespace {

struct Event {
  int64_t time;
  int pe;      // 0-based
  int plan_ix;
  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (pe != o.pe) return pe > o.pe;
    return plan_ix > o.plan_ix;
  }
};

}  // namespace

SimulationTrace simulate(const TileTaskGraph& g, const Schedule& schedule,
                         SimOptions options) {
  const int n = g.num_layers();
  if (int(schedule.per_pe.size()) != n)
    throw std::invalid_argument("schedule does not cover every PE");

  // tile state, indexed (m-1)*tiles + (ch-1)
  std::vector<std::vector<int64_t>> ifm_ready(n);   // -1 = not ready
  std::vector<std::vector<int>> ifm_pending(n);     // producer OFM tiles outstanding
  std::vector<std::vector<int64_t>> ofm_done(n);    // -1 = incomplete
  std::vector<std::vector<int>> ofm_remaining(n);   // contributions outstanding
  // consumers[i][ofm idx] = consumer IFM tile indices in layer i+1
  std::vector<std::vector<std::vector<int>>> consumers(n);

  for (int i = 0; i < n; ++i) {
    const auto& c = g.counts[i];
    ifm_ready[i].assign(size_t(c.ifm_tiles) * c.rc_tiles, i == 0 ? 0 : -1);
    ifm_pending[i].assign(size_t(c.ifm_tiles) * c.rc_tiles, 0);
    ofm_done[i].assign(size_t(c.ofm_tiles) * c.rc_tiles, -1);
    ofm_remaining[i].assign(size_t(c.ofm_tiles) * c.rc_tiles, c.ifm_tiles);
    consumers[i].resize(size_t(c.ofm_tiles) * c.rc_tiles);
  }
  for (const auto& e : g.intra_edges) {
    int pi = e.layer - 1;
    int ofm_ix = (e.m - 1) * g.counts[pi].ofm_tiles + (e.k - 1);
    int ifm_ix = (e.m - 1) * g.counts[pi + 1].ifm_tiles + (e.j - 1);
    consumers[pi][ofm_ix].push_back(ifm_ix);
    ifm_pending[pi + 1][ifm_ix]++;
  }

  SimulationTrace trace;
  trace.stall_per_pe.assign(n, 0);
  trace.first_start_per_pe.assign(n, -1);
  trace.busy_per_pe.assign(n, 0);

  std::vector<std::vector<char>> done(n);
  std::vector<int> scan_from(n, 0);  // first plan index that may still be pending
  std::vector<char> pe_busy(n, 0);
  std::vector<int64_t> last_end(n, 0);
  int64_t remaining_tasks = 0;
  for (int i = 0; i < n; ++i) {
    if (int64_t(schedule.per_pe[i].size()) != g.tasks_in_layer(i + 1))
      throw std::invalid_argument("schedule task count mismatch on PE " +
                                  std::to_string(i + 1));
    done[i].assign(schedule.per_pe[i].size(), 0);
    remaining_tasks += int64_t(schedule.per_pe[i].size());
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;

  auto try_dispatch = [&](int pe, int64_t now) -> bool {
    if (pe_busy[pe]) return false;
    const auto& plan = schedule.per_pe[pe];
    while (scan_from[pe] < int(plan.size()) && done[pe][scan_from[pe]])
      scan_from[pe]++;
    if (scan_from[pe] >= int(plan.size())) return false;
    int limit = options.ready_queue ? int(plan.size()) : scan_from[pe] + 1;
    for (int ix = scan_from[pe]; ix < limit; ++ix) {
      if (done[pe][ix]) continue;
      const TaskRef& t = plan[ix];
      const auto& c = g.counts[t.layer - 1];
      int ifm_ix = (t.m - 1) * c.ifm_tiles + (t.j - 1);
      int64_t ready = ifm_ready[t.layer - 1][ifm_ix];
      if (ready < 0 || ready > now) continue;
      int64_t end = now + g.et(t.layer);
      trace.records.push_back({t, pe + 1, now, end});
      if (trace.first_start_per_pe[pe] < 0) {
        trace.first_start_per_pe[pe] = now;
      } else if (now > last_end[pe]) {
        trace.stall_per_pe[pe] += now - last_end[pe];
      }
      trace.busy_per_pe[pe] += g.et(t.layer);
      last_end[pe] = end;
      pe_busy[pe] = 1;
      done[pe][ix] = 1;
      events.push({end, pe, ix});
      return true;
    }
    return false;
  };

  // initial dispatch at time 0
  for (int pe = 0; pe < n; ++pe) try_dispatch(pe, 0);

  int64_t now = 0;
  while (!events.empty()) {
    now = events.top().time;
    std::vector<int> freed;
    while (!events.empty() && events.top().time == now) {
      Event ev = events.top();
      events.pop();
      const TaskRef& t = schedule.per_pe[ev.pe][ev.plan_ix];
      pe_busy[ev.pe] = 0;
      remaining_tasks--;
      freed.push_back(ev.pe);
      int li = t.layer - 1;
      int ofm_ix = (t.m - 1) * g.counts[li].ofm_tiles + (t.k - 1);
      if (--ofm_remaining[li][ofm_ix] == 0) {
        ofm_done[li][ofm_ix] = now;
        for (int cons_ix : consumers[li][ofm_ix]) {
          if (--ifm_pending[li + 1][cons_ix] == 0) ifm_ready[li + 1][cons_ix] = now;
        }
      }
    }
    // freed PEs and PEs whose inputs just became ready may now start work
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int pe = 0; pe < n; ++pe) progressed |= try_dispatch(pe, now);
    }
  }

  if (remaining_tasks > 0) {
    std::ostringstream msg;
    msg << "deadlock: " << remaining_tasks << " tasks blocked; frontier:";
    for (int pe = 0; pe < n; ++pe) {
      const auto& plan = schedule.per_pe[pe];
      for (int ix = scan_from[pe]; ix < int(plan.size()); ++ix) {
        if (!done[pe][ix]) {
          const TaskRef& t = plan[ix];
          msg << " v(" << t.layer << ',' << t.j << ',' << t.k << ',' << t.m << ')';
          break;
        }
      }
    }
    throw DeadlockError(msg.str());
  }

  trace.makespan_cycles = 0;
  for (const auto& r : trace.records)
    trace.makespan_cycles = std::max(trace.makespan_cycles, r.end);
  return trace;
}

}  // namespace tilenas
