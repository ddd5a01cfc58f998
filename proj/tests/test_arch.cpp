#include <doctest.h>

#include <set>
#include <stdexcept>

#include "tilenas/arch.hpp"

using namespace tilenas;

TEST_CASE("validate_network accepts a well-formed single layer") {
  ChildNetwork net{{{3, 3, 1, 9, 28, 28}}};
  CHECK(!validate_network(net).has_value());
}

TEST_CASE("validate_network flags the first broken channel chain") {
  ChildNetwork net{{{3, 3, 1, 9, 28, 28}, {3, 3, 18, 36, 28, 28}}};
  auto issue = validate_network(net);
  REQUIRE(issue.has_value());
  CHECK(issue->layer_a == 1);
  CHECK(issue->layer_b == 2);
}

TEST_CASE("validate_network accepts a four-layer chain sampled from menu choices") {
  // FS in {5,7,14}, FN in {9,18,36}, chained correctly
  ChildNetwork net;
  int in_ch = 1;
  int fs[4] = {5, 7, 14, 5};
  int fn[4] = {9, 18, 36, 9};
  for (int i = 0; i < 4; ++i) {
    net.layers.push_back({fs[i], fs[i], in_ch, fn[i], 28, 28});
    in_ch = fn[i];
  }
  CHECK(!validate_network(net).has_value());
}

TEST_CASE("validate_network rejects non-positive fields") {
  ChildNetwork net{{{0, 3, 1, 9, 28, 28}}};
  CHECK(validate_network(net).has_value());
  ChildNetwork net2{{{3, 3, 1, 9, 28, 0}}};
  CHECK(validate_network(net2).has_value());
}

TEST_CASE("validate_network rejects feature-map dimension mismatch") {
  ChildNetwork net{{{3, 3, 1, 9, 28, 28}, {3, 3, 9, 18, 14, 14}}};
  auto issue = validate_network(net);
  REQUIRE(issue.has_value());
  CHECK(issue->layer_a == 1);
}

TEST_CASE("space_size and enumerate_networks counts") {
  SearchSpace s1{1, {3}, {2, 4}, 8, 8, 1};
  CHECK(space_size(s1) == 2);
  CHECK(enumerate_networks(s1).size() == 2);

  SearchSpace s2{2, {3, 5}, {2}, 8, 8, 1};
  CHECK(space_size(s2) == 4);
  CHECK(enumerate_networks(s2).size() == 4);
}

TEST_CASE("enumerate_networks yields distinct valid networks") {
  SearchSpace s{2, {1, 3}, {2, 4}, 6, 6, 3};
  auto nets = enumerate_networks(s);
  CHECK(nets.size() == space_size(s));
  std::set<std::string> seen;
  for (const auto& n : nets) {
    CHECK(!validate_network(n).has_value());
    CHECK(seen.insert(describe_network(n)).second);
  }
}

TEST_CASE("enumerate_networks refuses spaces over the cap") {
  SearchSpace s{8, {1, 3, 5}, {2, 4, 8, 16}, 6, 6, 3};  // 12^8 networks
  CHECK_THROWS_AS(enumerate_networks(s), std::runtime_error);
  CHECK_NOTHROW(enumerate_networks(SearchSpace{1, {3}, {2}, 4, 4, 1}, 1));
}

TEST_CASE("sample_networks is deterministic per seed") {
  SearchSpace s{2, {3, 5}, {2}, 8, 8, 1};
  auto a = sample_networks(s, 7, 3);
  auto b = sample_networks(s, 7, 3);
  CHECK(a == b);
  for (const auto& n : a) CHECK(!validate_network(n).has_value());
}

TEST_CASE("make_network chains channels through the choice list") {
  SearchSpace s{3, {3, 5}, {9, 18}, 14, 14, 1};
  ChildNetwork n = make_network(s, {{1, 1}, {0, 0}, {0, 1}});
  REQUIRE(n.layers.size() == 3);
  CHECK(n.layers[0] == ConvLayer{5, 5, 1, 18, 14, 14});
  CHECK(n.layers[1] == ConvLayer{3, 3, 18, 9, 14, 14});
  CHECK(n.layers[2] == ConvLayer{3, 3, 9, 18, 14, 14});
}

TEST_CASE("validate_space and validate_platform") {
  CHECK(!validate_space(SearchSpace{1, {3}, {2}, 4, 4, 1}).has_value());
  CHECK(validate_space(SearchSpace{1, {}, {2}, 4, 4, 1}).has_value());
  CHECK(validate_space(SearchSpace{0, {3}, {2}, 4, 4, 1}).has_value());
  CHECK(!validate_platform(PlatformSpec{1, 220, 100.0, 10.0}).has_value());
  CHECK(validate_platform(PlatformSpec{0, 220, 100.0, 10.0}).has_value());
  CHECK(validate_platform(PlatformSpec{1, 220, 100.0, 0.0}).has_value());
}

TEST_CASE("network descriptor round-trips") {
  ChildNetwork net{{{3, 3, 1, 9, 28, 28}, {5, 5, 9, 18, 28, 28}}};
  std::string d = describe_network(net);
  CHECK(d == "3x3x1x9x28x28|5x5x9x18x28x28");
  auto back = parse_network_descriptor(d);
  REQUIRE(back.has_value());
  CHECK(*back == net);
  CHECK(!parse_network_descriptor("3x3x1").has_value());
  CHECK(!parse_network_descriptor("").has_value());
}

TEST_CASE("mac counting") {
  ConvLayer l{3, 3, 2, 4, 5, 6};
  CHECK(l.mac_count() == int64_t(3) * 3 * 2 * 4 * 5 * 6);
  ChildNetwork net{{l, {1, 1, 4, 2, 5, 6}}};
  CHECK(net.total_macs() == l.mac_count() + int64_t(1) * 1 * 4 * 2 * 5 * 6);
}
