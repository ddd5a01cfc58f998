#include "tilenas/design.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tilenas {

std::vector<int> allocate_dsps(const ChildNetwork& net, const PlatformSpec& platform) {
  if (auto issue = validate_network(net))
    throw std::invalid_argument("invalid network: " + issue->message);
  if (auto err = validate_platform(platform))
    throw std::invalid_argument("invalid platform: " + *err);

  const int layers = int(net.layers.size());
  const int total = platform.total_dsps();
  if (layers > total) {
    std::ostringstream msg;
    msg << "infeasible: " << layers << " layers need at least one DSP each but the "
        << "platform has only " << total;
    throw InfeasibleDesign(msg.str(), 0);
  }

  int64_t mac_sum = net.total_macs();
  std::vector<int> budget(layers, 0);
  std::vector<std::pair<int64_t, int>> remainder(layers);  // (remainder, -layer) for ties
  int assigned = 0;
  for (int i = 0; i < layers; ++i) {
    int64_t num = int64_t(total) * net.layers[i].mac_count();
    budget[i] = int(num / mac_sum);
    remainder[i] = {num % mac_sum, -i};
    assigned += budget[i];
  }
  // largest-remainder rounding for the leftover DSPs
  std::sort(remainder.begin(), remainder.end(), std::greater<>());
  for (int r = 0; r < total - assigned; ++r) budget[-remainder[r % layers].second]++;

  // every PE needs at least one DSP; take from the largest budgets
  for (int i = 0; i < layers; ++i) {
    while (budget[i] < 1) {
      int donor = int(std::max_element(budget.begin(), budget.end()) - budget.begin());
      if (budget[donor] <= 1) throw InfeasibleDesign("cannot give every layer a DSP", 0);
      budget[donor]--;
      budget[i]++;
    }
  }

  // no budget may exceed one FPGA; re-spread the clamped slack where room remains
  int slack = 0;
  for (int& b : budget) {
    if (b > platform.dsp_per_fpga) {
      slack += b - platform.dsp_per_fpga;
      b = platform.dsp_per_fpga;
    }
  }
  while (slack > 0) {
    int best = -1;
    for (int i = 0; i < layers; ++i) {
      if (budget[i] >= platform.dsp_per_fpga) continue;
      if (best < 0 || net.layers[i].mac_count() > net.layers[best].mac_count()) best = i;
    }
    if (best < 0) break;  // everyone at capacity; leave the slack unused
    budget[best]++;
    slack--;
  }
  return budget;
}

int64_t standalone_cycles(const ConvLayer& layer, const LayerTiling& t) {
  return t.et_cycles * ceil_div(layer.in_ch, t.tn) * ceil_div(layer.out_ch, t.tm) *
         ceil_div(layer.rows, t.tr) * ceil_div(layer.cols, t.tc);
}

LayerTiling select_tiling(const ConvLayer& layer, int dsp_budget) {
  if (dsp_budget < 1) throw std::invalid_argument("dsp_budget must be >= 1");

  // The objective factors into a channel term ceil(N/tn)*ceil(M/tm) constrained
  // by tm*tn <= budget and an unconstrained spatial term tr*tc*ceil(R/tr)*ceil(C/tc),
  // so the two pairs can be optimized independently.
  int best_tn = 1, best_tm = 1;
  int64_t best_ch = ceil_div(layer.in_ch, 1) * ceil_div(layer.out_ch, 1);
  for (int tn = 1; tn <= std::min(layer.in_ch, dsp_budget); ++tn) {
    for (int tm = 1; tm <= std::min(layer.out_ch, dsp_budget / tn); ++tm) {
      int64_t ch = ceil_div(layer.in_ch, tn) * ceil_div(layer.out_ch, tm);
      if (ch < best_ch || (ch == best_ch && (tn > best_tn || (tn == best_tn && tm > best_tm)))) {
        best_ch = ch;
        best_tn = tn;
        best_tm = tm;
      }
    }
  }

  int best_tr = 1, best_tc = 1;
  auto spatial = [](int dim, int tile) { return int64_t(tile) * ceil_div(dim, tile); };
  for (int tr = 1; tr <= layer.rows; ++tr)
    if (spatial(layer.rows, tr) < spatial(layer.rows, best_tr) ||
        (spatial(layer.rows, tr) == spatial(layer.rows, best_tr) && tr > best_tr))
      best_tr = tr;
  for (int tc = 1; tc <= layer.cols; ++tc)
    if (spatial(layer.cols, tc) < spatial(layer.cols, best_tc) ||
        (spatial(layer.cols, tc) == spatial(layer.cols, best_tc) && tc > best_tc))
      best_tc = tc;

  LayerTiling t;
  t.tm = best_tm;
  t.tn = best_tn;
  t.tr = best_tr;
  t.tc = best_tc;
  t.dsp_used = best_tm * best_tn;
  t.et_cycles = int64_t(layer.kh) * layer.kw * best_tr * best_tc;
  return t;
}

TilingDesign build_design(const ChildNetwork& net, const PlatformSpec& platform) {
  std::vector<int> budget = allocate_dsps(net, platform);
  const int layers = int(net.layers.size());

  TilingDesign design;
  design.per_layer.reserve(layers);
  for (int i = 0; i < layers; ++i)
    design.per_layer.push_back(select_tiling(net.layers[i], budget[i]));

  // Cross-layer pass: a consumer reads its input at granularity tn, the producer
  // writes it at granularity tm. Shrink tm to the largest divisor of the
  // consumer's tn so every IFM tile maps to a whole number of producer tiles.
  for (int p = 0; p + 1 < layers; ++p) {
    auto& prod = design.per_layer[p];
    int tn_next = design.per_layer[p + 1].tn;
    while (tn_next % prod.tm != 0) prod.tm--;
    prod.dsp_used = prod.tm * prod.tn;
  }

  // contiguous first-fit placement
  design.pe_to_fpga.assign(layers, 0);
  int fpga = 0;
  int used = 0;
  for (int i = 0; i < layers; ++i) {
    if (used + design.per_layer[i].dsp_used > platform.dsp_per_fpga) {
      fpga++;
      used = 0;
    }
    if (fpga >= platform.num_fpgas || design.per_layer[i].dsp_used > platform.dsp_per_fpga) {
      std::ostringstream msg;
      msg << "infeasible placement: PE " << i + 1 << " (" << design.per_layer[i].dsp_used
          << " DSPs) does not fit on any remaining FPGA";
      throw InfeasibleDesign(msg.str(), i + 1);
    }
    design.pe_to_fpga[i] = fpga;
    used += design.per_layer[i].dsp_used;
  }
  return design;
}

}  // namespace tilenas
