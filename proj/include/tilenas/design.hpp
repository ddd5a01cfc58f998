#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilenas/arch.hpp"

namespace tilenas {

// Tiling of one layer's processing element. The PE holds tm*tn multiply
// accumulate lanes, so one task (one IFM/OFM channel-tile pair at one spatial
// tile) takes kh*kw*tr*tc cycles.
struct LayerTiling {
  int tm = 1;  // OFM channel tile size
  int tn = 1;  // IFM channel tile size
  int tr = 1;  // row tile size
  int tc = 1;  // col tile size
  int dsp_used = 1;        // tm * tn
  int64_t et_cycles = 1;   // kh * kw * tr * tc

  bool operator==(const LayerTiling&) const = default;
};

struct TilingDesign {
  std::vector<LayerTiling> per_layer;  // one PE per layer
  std::vector<int> pe_to_fpga;         // 0-based FPGA index per PE, contiguous in layer order

  bool operator==(const TilingDesign&) const = default;
};

class InfeasibleDesign : public std::runtime_error {
 public:
  InfeasibleDesign(std::string msg, int pe) : std::runtime_error(std::move(msg)), pe_(pe) {}
  // 1-based index of the first PE that cannot be placed/sized, 0 if global.
  int pe() const { return pe_; }

 private:
  int pe_;
};

// Splits the platform's DSPs across layers proportionally to per-layer MAC
// counts (largest-remainder rounding), every layer getting at least one DSP.
// Budgets exceeding one FPGA's capacity are clamped and the slack re-spread.
// Throws InfeasibleDesign when layers outnumber total DSPs.
std::vector<int> allocate_dsps(const ChildNetwork& net, const PlatformSpec& platform);

// Exhaustive search over (tm, tn, tr, tc) with tm*tn <= dsp_budget minimizing the
// layer's standalone cycles et * ceil(N/tn) * ceil(M/tm) * ceil(R/tr) * ceil(C/tc).
// Ties prefer larger tn, then tm, then tr, then tc.
LayerTiling select_tiling(const ConvLayer& layer, int dsp_budget);

// Standalone processing cycles of one layer under a tiling (all tasks serial).
int64_t standalone_cycles(const ConvLayer& layer, const LayerTiling& tiling);

// allocate_dsps + select_tiling per layer, a cross-layer pass that shrinks each
// producer's tm to a divisor of its consumer's tn (keeps channel-tile mappings
// integral), then contiguous first-fit placement of PEs onto FPGAs.
TilingDesign build_design(const ChildNetwork& net, const PlatformSpec& platform);

inline int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

}  // namespace tilenas
