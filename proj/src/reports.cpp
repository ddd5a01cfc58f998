#include "tilenas/reports.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tilenas {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string task_id(const TaskRef& t) {
  std::ostringstream s;
  s << 'v' << t.layer << '.' << t.j << '.' << t.k << '.' << t.m;
  return s.str();
}

}  // namespace

std::string tiling_report(const ChildNetwork& net, const TilingDesign& design) {
  std::ostringstream out;
  out << "# per-layer tiling design\n";
  out << "layer  Tm  Tn  Tr  Tc  DSPs  ET_cycles  FPGA\n";
  for (size_t i = 0; i < design.per_layer.size(); ++i) {
    const auto& t = design.per_layer[i];
    out << i + 1 << "  " << t.tm << "  " << t.tn << "  " << t.tr << "  " << t.tc << "  "
        << t.dsp_used << "  " << t.et_cycles << "  " << design.pe_to_fpga[i] + 1 << "\n";
  }
  out << "# network: " << describe_network(net) << "\n";
  return out.str();
}

std::string schedule_csv(const Schedule& schedule) {
  std::ostringstream out;
  out << "# schema: tilenas.schedule.v1\n";
  out << "pe,layer,j,k,m,position\n";
  for (size_t pe = 0; pe < schedule.per_pe.size(); ++pe) {
    const auto& plan = schedule.per_pe[pe];
    for (size_t pos = 0; pos < plan.size(); ++pos) {
      const auto& t = plan[pos];
      out << pe + 1 << ',' << t.layer << ',' << t.j << ',' << t.k << ',' << t.m << ','
          << pos + 1 << "\n";
    }
  }
  return out.str();
}

std::string simulation_trace_csv(const SimulationTrace& trace) {
  std::ostringstream out;
  out << "# schema: tilenas.sim-trace.v1\n";
  out << "task,pe,start,end\n";
  for (const auto& r : trace.records)
    out << task_id(r.task) << ',' << r.pe << ',' << r.start << ',' << r.end << "\n";
  return out.str();
}

std::string latency_report(const LatencyReport& a, const SimulationTrace& sched_trace,
                           const SimulationTrace& fixed_trace, const PlatformSpec& platform) {
  std::ostringstream out;
  out << "lat_sys_cycles = " << a.lat_sys_cycles << "\n";
  out << "latency_ms = " << fmt_double(a.latency_ms) << "\n";
  out << "clock_mhz = " << fmt_double(platform.clock_mhz) << "\n";
  for (size_t i = 0; i < a.pt_per_pe.size(); ++i)
    out << "pt_pe" << i + 1 << " = " << a.pt_per_pe[i] << "\n";
  for (size_t i = 1; i < a.delta_cycles.size(); ++i)
    out << "delta_pe" << i + 1 << " = " << a.delta_cycles[i] << " ("
        << (a.delta_kind[i] == 'o' ? "ofm" : "ifm") << ")\n";
  out << "sim_makespan_cycles = " << sched_trace.makespan_cycles << "\n";
  int64_t stalls = 0;
  for (int64_t s : sched_trace.stall_per_pe) stalls += s;
  out << "sim_stall_cycles = " << stalls << "\n";
  out << "fixed_sched_makespan_cycles = " << fixed_trace.makespan_cycles << "\n";
  return out.str();
}

std::string search_trace_csv(const std::vector<SearchTraceEntry>& trace) {
  std::ostringstream out;
  out << "# schema: tilenas.search-trace.v1\n";
  out << "trial,network,latency_ms,pruned,failed,accuracy,reward,evaluator_calls\n";
  for (const auto& e : trace) {
    out << e.trial << ',' << describe_network(e.net) << ',' << fmt_double(e.latency_ms)
        << ',' << (e.pruned ? 1 : 0) << ',' << (e.failed ? 1 : 0) << ','
        << (e.accuracy ? fmt_double(*e.accuracy) : "") << ',' << fmt_double(e.reward_value)
        << ',' << e.evaluator_calls << "\n";
  }
  return out.str();
}

std::string best_network_report(const SearchResult& result, const PlatformSpec& platform) {
  std::ostringstream out;
  if (!result.best) {
    out << "result = no feasible architecture\n";
    out << "rl_ms = " << fmt_double(platform.rl_ms) << "\n";
    return out.str();
  }
  const auto& b = *result.best;
  out << "result = ok\n";
  out << "network = " << describe_network(b.net) << "\n";
  out << "trial = " << b.trial << "\n";
  out << "latency_ms = " << fmt_double(b.latency_ms) << "\n";
  out << "rl_ms = " << fmt_double(platform.rl_ms) << "\n";
  out << "accuracy = " << (b.accuracy ? fmt_double(*b.accuracy) : "") << "\n";
  out << "reward = " << fmt_double(b.reward_value) << "\n";
  return out.str();
}

std::string search_summary(const SearchResult& result) {
  int pruned = 0, failed = 0;
  for (const auto& e : result.trace) {
    if (e.pruned) pruned++;
    if (e.failed) failed++;
  }
  std::ostringstream out;
  out << "trials = " << result.trace.size() << "\n";
  out << "evaluator_calls = " << result.evaluator_calls << "\n";
  out << "pruned = " << pruned << "\n";
  out << "failed = " << failed << "\n";
  out << "pruned_fraction = "
      << fmt_double(result.trace.empty() ? 0.0 : double(pruned) / result.trace.size())
      << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace tilenas
