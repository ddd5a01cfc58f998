#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tilenas {

// One convolutional layer of a candidate network. Feature-map dims follow the
// stride-1 / same-padding convention, so rows/cols stay constant through a chain.
struct ConvLayer {
  int kh = 1;      // kernel height
  int kw = 1;      // kernel width
  int in_ch = 1;   // input feature-map channels
  int out_ch = 1;  // output feature-map channels
  int rows = 1;    // output rows
  int cols = 1;    // output cols

  int64_t mac_count() const {
    return int64_t(kh) * kw * rows * cols * int64_t(in_ch) * out_ch;
  }

  bool operator==(const ConvLayer&) const = default;
};

struct ChildNetwork {
  std::vector<ConvLayer> layers;

  int64_t total_macs() const {
    int64_t total = 0;
    for (const auto& l : layers) total += l.mac_count();
    return total;
  }

  bool operator==(const ChildNetwork&) const = default;
};

struct ValidationIssue {
  int layer_a = 0;  // 1-based; first layer of the offending pair (0 for per-layer issues)
  int layer_b = 0;
  std::string message;
};

// Returns nullopt when the network is well-formed, otherwise the first violation
// found (positive-field check per layer, then channel chaining and feature-map
// consistency per consecutive pair).
std::optional<ValidationIssue> validate_network(const ChildNetwork& net);

struct SearchSpace {
  int num_layers = 1;
  std::vector<int> filter_sizes;   // square kernel side choices
  std::vector<int> filter_counts;  // output channel choices
  int input_rows = 1;
  int input_cols = 1;
  int input_channels = 1;

  bool operator==(const SearchSpace&) const = default;
};

std::optional<std::string> validate_space(const SearchSpace& space);

// Number of distinct networks in the space: (|FS|*|FN|)^L.
uint64_t space_size(const SearchSpace& space);

// Instantiates a network from per-layer (filter-size index, filter-count index)
// choices.
ChildNetwork make_network(const SearchSpace& space,
                          const std::vector<std::pair<int, int>>& choices);

inline constexpr uint64_t kDefaultExhaustiveCap = 1'000'000;

// Every network in the space, in mixed-radix order over per-layer choices.
// Throws std::runtime_error when the space exceeds `cap`.
std::vector<ChildNetwork> enumerate_networks(const SearchSpace& space,
                                             uint64_t cap = kDefaultExhaustiveCap);

// `count` networks drawn uniformly per choice slot; deterministic for a fixed seed.
std::vector<ChildNetwork> sample_networks(const SearchSpace& space, uint64_t seed,
                                          int count);

struct PlatformSpec {
  int num_fpgas = 1;
  int dsp_per_fpga = 1;
  double clock_mhz = 100.0;
  double rl_ms = 1.0;  // required inference latency

  int total_dsps() const { return num_fpgas * dsp_per_fpga; }

  bool operator==(const PlatformSpec&) const = default;
};

std::optional<std::string> validate_platform(const PlatformSpec& platform);

// "3x3x1x9x28x28|..." one segment per layer; parse round-trips format.
std::string describe_network(const ChildNetwork& net);
std::optional<ChildNetwork> parse_network_descriptor(const std::string& text);

}  // namespace tilenas
