#include <doctest.h>

#include "oracles.hpp"
#include "tilenas/analyzer.hpp"
#include "tilenas/sched.hpp"

using namespace tilenas;

namespace {

LayerTiling tiling(const ConvLayer& l, int tm, int tn, int tr, int tc) {
  return {tm, tn, tr, tc, tm * tn, int64_t(l.kh) * l.kw * tr * tc};
}

}  // namespace

TEST_CASE("alternating_policy starts with OFM reuse and alternates") {
  auto p = alternating_policy(4);
  REQUIRE(p.size() == 4);
  CHECK(p[0] == Reuse::OfmReuse);
  CHECK(p[1] == Reuse::IfmReuse);
  CHECK(p[2] == Reuse::OfmReuse);
  CHECK(p[3] == Reuse::IfmReuse);
}

TEST_CASE("order_ifm_tiles: channel index fastest, spatial slowest") {
  // 2 channel tiles x 1 rc
  ChildNetwork net1{{{1, 1, 4, 2, 2, 2}}};
  TilingDesign d1{{tiling(net1.layers[0], 2, 2, 2, 2)}, {0}};
  auto o1 = order_ifm_tiles(build_graph(net1, d1), 1);
  CHECK(o1 == std::vector<TileOrderEntry>{{1, 1}, {2, 1}});

  // 2 channel x 2 rc
  ChildNetwork net2{{{1, 1, 4, 2, 2, 2}}};
  TilingDesign d2{{tiling(net2.layers[0], 2, 2, 1, 2)}, {0}};
  auto o2 = order_ifm_tiles(build_graph(net2, d2), 1);
  CHECK(o2 == std::vector<TileOrderEntry>{{1, 1}, {2, 1}, {1, 2}, {2, 2}});

  // 1 channel x 3 rc (rows=3, tr=1)
  ChildNetwork net3{{{1, 1, 2, 2, 3, 2}}};
  TilingDesign d3{{tiling(net3.layers[0], 2, 2, 1, 2)}, {0}};
  auto o3 = order_ifm_tiles(build_graph(net3, d3), 1);
  CHECK(o3 == std::vector<TileOrderEntry>{{1, 1}, {1, 2}, {1, 3}});
}

TEST_CASE("order_ofm_tiles equals the consumer IFM order under a one-to-one mapping") {
  ChildNetwork net{{{1, 1, 2, 4, 2, 2}, {1, 1, 4, 2, 2, 2}}};
  TilingDesign d{{tiling(net.layers[0], 2, 2, 1, 2), tiling(net.layers[1], 2, 2, 1, 2)}, {0, 0}};
  TileTaskGraph g = build_graph(net, d);
  REQUIRE(g.ratio[0] == 1);
  CHECK(order_ofm_tiles(g, 1) == order_ifm_tiles(g, 2));
}

TEST_CASE("order_ofm_tiles under ratio 2 visits producer tiles in consumer order") {
  ChildNetwork net{{{1, 1, 2, 4, 2, 2}, {1, 1, 4, 2, 2, 2}}};
  TilingDesign d{{tiling(net.layers[0], 1, 2, 2, 2), tiling(net.layers[1], 2, 2, 2, 2)}, {0, 0}};
  TileTaskGraph g = build_graph(net, d);
  REQUIRE(g.ratio[0] == 2);
  auto o = order_ofm_tiles(g, 1);
  CHECK(o == std::vector<TileOrderEntry>{{1, 1}, {2, 1}, {3, 1}, {4, 1}});
}

TEST_CASE("order_ofm_tiles of the last layer is natural (k, m) order") {
  ChildNetwork net{{{1, 1, 2, 4, 2, 2}}};
  TilingDesign d{{tiling(net.layers[0], 2, 2, 1, 2)}, {0}};
  TileTaskGraph g = build_graph(net, d);
  CHECK(order_ofm_tiles(g, 1) == std::vector<TileOrderEntry>{{1, 1}, {2, 1}, {1, 2}, {2, 2}});
}

TEST_CASE("build_schedule groups per reuse tag on a two-layer case") {
  ChildNetwork net{{{1, 1, 4, 4, 2, 2}, {1, 1, 4, 4, 2, 2}}};
  TilingDesign d{{tiling(net.layers[0], 2, 2, 2, 2), tiling(net.layers[1], 2, 2, 2, 2)}, {0, 0}};
  TileTaskGraph g = build_graph(net, d);
  Schedule s = build_schedule(g, alternating_policy(2));
  CHECK(s.policy[0] == Reuse::OfmReuse);
  CHECK(s.policy[1] == Reuse::IfmReuse);
  CHECK(oracles::schedule_is_permutation(g, s));
  CHECK(oracles::schedule_contiguity_holds(s));
  // PE1 keeps one OFM tile resident across consecutive tasks
  for (size_t i = 0; i + 1 < s.per_pe[0].size(); i += 2)
    CHECK(s.per_pe[0][i].k == s.per_pe[0][i + 1].k);
  // PE2 keeps one IFM tile resident
  for (size_t i = 0; i + 1 < s.per_pe[1].size(); i += 2)
    CHECK(s.per_pe[1][i].j == s.per_pe[1][i + 1].j);
}

TEST_CASE("single-task graph: both schedulers emit the unique task") {
  ChildNetwork net{{{3, 3, 2, 2, 4, 4}}};
  TilingDesign d{{tiling(net.layers[0], 2, 2, 4, 4)}, {0}};
  TileTaskGraph g = build_graph(net, d);
  Schedule a = build_schedule(g, alternating_policy(1));
  Schedule b = build_fixed_schedule(g);
  CHECK(a.per_pe == b.per_pe);
  REQUIRE(a.per_pe[0].size() == 1);
  CHECK(a.per_pe[0][0] == TaskRef{1, 1, 1, 1});
}

TEST_CASE("fixed schedule uses the rigid nested-loop order") {
  // 2x2 channel tiles, 1 rc tile
  ChildNetwork net{{{1, 1, 4, 4, 2, 2}}};
  TilingDesign d{{tiling(net.layers[0], 2, 2, 2, 2)}, {0}};
  TileTaskGraph g = build_graph(net, d);
  Schedule s = build_fixed_schedule(g);
  std::vector<TaskRef> expect{{1, 1, 1, 1}, {1, 2, 1, 1}, {1, 1, 2, 1}, {1, 2, 2, 1}};
  CHECK(s.per_pe[0] == expect);
}

TEST_CASE("random graphs: invariants hold and neither schedule deadlocks") {
  oracles::InstanceGen gen(37);
  for (int it = 0; it < 40; ++it) {
    ChildNetwork net = gen.random_network(3, 16);
    PlatformSpec p = gen.random_platform(net);
    TileTaskGraph g;
    try {
      g = build_graph(net, build_design(net, p));
    } catch (const InfeasibleDesign&) {
      continue;
    }
    Schedule reuse_aware = build_schedule(g, alternating_policy(g.num_layers()));
    Schedule fixed = build_fixed_schedule(g);
    CHECK(oracles::schedule_is_permutation(g, reuse_aware));
    CHECK(oracles::schedule_is_permutation(g, fixed));
    CHECK(oracles::schedule_contiguity_holds(reuse_aware));
    CHECK_NOTHROW(simulate(g, reuse_aware));
    CHECK_NOTHROW(simulate(g, fixed, {.ready_queue = false}));
  }
}

TEST_CASE("scheduler dominance on random pipelines") {
  oracles::InstanceGen gen(41);
  int strict = 0;
  for (int it = 0; it < 40; ++it) {
    ChildNetwork net = gen.random_network(4, 32);
    if (net.layers.size() < 2) continue;
    PlatformSpec p = gen.random_platform(net);
    TileTaskGraph g;
    try {
      g = build_graph(net, build_design(net, p));
    } catch (const InfeasibleDesign&) {
      continue;
    }
    auto reuse_aware = simulate(g, build_schedule(g, alternating_policy(g.num_layers())));
    auto fixed = simulate(g, build_fixed_schedule(g), {.ready_queue = false});
    CHECK(reuse_aware.makespan_cycles <= fixed.makespan_cycles);
    if (reuse_aware.makespan_cycles < fixed.makespan_cycles) strict++;
  }
  CHECK(strict >= 1);
}
