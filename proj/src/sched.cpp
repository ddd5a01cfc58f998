#include "tilenas/sched.hpp"

#include <algorithm>
#include <stdexcept>

namespace tilenas {

std::vector<Reuse> alternating_policy(int num_pes) {
  std::vector<Reuse> policy(num_pes);
  for (int i = 0; i < num_pes; ++i)
    policy[i] = (i % 2 == 0) ? Reuse::OfmReuse : Reuse::IfmReuse;
  return policy;
}

std::vector<TileOrderEntry> order_ifm_tiles(const TileTaskGraph& g, int layer) {
  const auto& c = g.counts.at(layer - 1);
  std::vector<TileOrderEntry> order;
  order.reserve(size_t(c.ifm_tiles) * c.rc_tiles);
  for (int m = 1; m <= c.rc_tiles; ++m)
    for (int j = 1; j <= c.ifm_tiles; ++j) order.push_back({j, m});
  return order;
}

std::vector<TileOrderEntry> order_ofm_tiles(const TileTaskGraph& g, int layer) {
  const auto& c = g.counts.at(layer - 1);
  std::vector<TileOrderEntry> order;
  order.reserve(size_t(c.ofm_tiles) * c.rc_tiles);
  for (int m = 1; m <= c.rc_tiles; ++m)
    for (int k = 1; k <= c.ofm_tiles; ++k) order.push_back({k, m});
  if (layer == g.num_layers()) return order;  // no consumer: natural order

  // position of tile k's earliest consumer in the next layer's IFM sequence
  const int next_ifm = g.counts[layer].ifm_tiles;
  const int rho = g.ratio[layer - 1];
  auto consumer_pos = [&](const TileOrderEntry& t) {
    int j = std::min((t.ch + rho - 1) / rho, next_ifm);
    return int64_t(t.m - 1) * next_ifm + j;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](const TileOrderEntry& a, const TileOrderEntry& b) {
                     auto pa = consumer_pos(a), pb = consumer_pos(b);
                     if (pa != pb) return pa < pb;
                     return a.ch < b.ch;
                   });
  return order;
}

Schedule build_schedule(const TileTaskGraph& g, const std::vector<Reuse>& policy) {
  if (int(policy.size()) != g.num_layers())
    throw std::invalid_argument("policy must cover every PE");
  Schedule s;
  s.policy = policy;
  s.per_pe.resize(g.num_layers());
  for (int i = 1; i <= g.num_layers(); ++i) {
    auto ifm = order_ifm_tiles(g, i);
    auto ofm = order_ofm_tiles(g, i);
    auto& plan = s.per_pe[i - 1];
    plan.reserve(g.tasks_in_layer(i));
    if (policy[i - 1] == Reuse::OfmReuse) {
      for (const auto& o : ofm)
        for (const auto& f : ifm)
          if (f.m == o.m) plan.push_back({i, f.ch, o.ch, o.m});
    } else {
      for (const auto& f : ifm)
        for (const auto& o : ofm)
          if (o.m == f.m) plan.push_back({i, f.ch, o.ch, f.m});
    }
  }
  return s;
}

Schedule build_fixed_schedule(const TileTaskGraph& g) {
  Schedule s;
  s.policy.assign(g.num_layers(), Reuse::OfmReuse);
  s.per_pe.resize(g.num_layers());
  for (int i = 1; i <= g.num_layers(); ++i) {
    const auto& c = g.counts[i - 1];
    auto& plan = s.per_pe[i - 1];
    plan.reserve(g.tasks_in_layer(i));
    for (int m = 1; m <= c.rc_tiles; ++m)
      for (int k = 1; k <= c.ofm_tiles; ++k)
        for (int j = 1; j <= c.ifm_tiles; ++j) plan.push_back({i, j, k, m});
  }
  return s;
}

}  // namespace tilenas
