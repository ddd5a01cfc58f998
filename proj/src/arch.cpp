#include "tilenas/arch.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace tilenas {

std::optional<ValidationIssue> validate_network(const ChildNetwork& net) {
  if (net.layers.empty())
    return ValidationIssue{0, 0, "network has no layers"};
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const auto& l = net.layers[i];
    if (l.kh < 1 || l.kw < 1 || l.in_ch < 1 || l.out_ch < 1 || l.rows < 1 || l.cols < 1)
      return ValidationIssue{int(i + 1), 0, "layer has a non-positive field"};
  }
  for (size_t i = 0; i + 1 < net.layers.size(); ++i) {
    const auto& a = net.layers[i];
    const auto& b = net.layers[i + 1];
    if (b.in_ch != a.out_ch) {
      std::ostringstream msg;
      msg << "channel chaining broken: layer " << i + 1 << " out_ch=" << a.out_ch
          << " but layer " << i + 2 << " in_ch=" << b.in_ch;
      return ValidationIssue{int(i + 1), int(i + 2), msg.str()};
    }
    if (b.rows != a.rows || b.cols != a.cols) {
      std::ostringstream msg;
      msg << "feature-map dims change between layers " << i + 1 << " and " << i + 2
          << " (stride-1 same-padding keeps them constant)";
      return ValidationIssue{int(i + 1), int(i + 2), msg.str()};
    }
  }
  return std::nullopt;
}

std::optional<std::string> validate_space(const SearchSpace& space) {
  if (space.num_layers < 1) return "num_layers must be >= 1";
  if (space.filter_sizes.empty()) return "filter_sizes must be non-empty";
  if (space.filter_counts.empty()) return "filter_counts must be non-empty";
  for (int fs : space.filter_sizes)
    if (fs < 1) return "filter sizes must be positive";
  for (int fn : space.filter_counts)
    if (fn < 1) return "filter counts must be positive";
  if (space.input_rows < 1 || space.input_cols < 1 || space.input_channels < 1)
    return "input dims must be positive";
  return std::nullopt;
}

uint64_t space_size(const SearchSpace& space) {
  uint64_t per_layer = uint64_t(space.filter_sizes.size()) * space.filter_counts.size();
  uint64_t total = 1;
  for (int i = 0; i < space.num_layers; ++i) {
    if (per_layer != 0 && total > UINT64_MAX / per_layer) return UINT64_MAX;
    total *= per_layer;
  }
  return total;
}

ChildNetwork make_network(const SearchSpace& space,
                          const std::vector<std::pair<int, int>>& choices) {
  if (int(choices.size()) != space.num_layers)
    throw std::invalid_argument("choice vector length does not match num_layers");
  ChildNetwork net;
  int in_ch = space.input_channels;
  for (int i = 0; i < space.num_layers; ++i) {
    ConvLayer l;
    l.kh = l.kw = space.filter_sizes.at(choices[i].first);
    l.in_ch = in_ch;
    l.out_ch = space.filter_counts.at(choices[i].second);
    l.rows = space.input_rows;
    l.cols = space.input_cols;
    net.layers.push_back(l);
    in_ch = l.out_ch;
  }
  return net;
}

std::vector<ChildNetwork> enumerate_networks(const SearchSpace& space, uint64_t cap) {
  if (auto err = validate_space(space)) throw std::invalid_argument(*err);
  uint64_t total = space_size(space);
  if (total > cap) {
    std::ostringstream msg;
    msg << "exhaustive enumeration refused: space has " << total
        << " networks, cap is " << cap;
    throw std::runtime_error(msg.str());
  }
  std::vector<ChildNetwork> out;
  out.reserve(total);
  std::vector<std::pair<int, int>> choices(space.num_layers, {0, 0});
  const int nfs = int(space.filter_sizes.size());
  const int nfn = int(space.filter_counts.size());
  for (uint64_t n = 0; n < total; ++n) {
    out.push_back(make_network(space, choices));
    // mixed-radix increment, last layer fastest, fn digit before fs
    for (int i = space.num_layers - 1; i >= 0; --i) {
      if (++choices[i].second < nfn) break;
      choices[i].second = 0;
      if (++choices[i].first < nfs) break;
      choices[i].first = 0;
    }
  }
  return out;
}

std::vector<ChildNetwork> sample_networks(const SearchSpace& space, uint64_t seed,
                                          int count) {
  if (auto err = validate_space(space)) throw std::invalid_argument(*err);
  std::mt19937_64 rng(seed);
  std::vector<ChildNetwork> out;
  out.reserve(count);
  const int nfs = int(space.filter_sizes.size());
  const int nfn = int(space.filter_counts.size());
  std::vector<std::pair<int, int>> choices(space.num_layers);
  for (int n = 0; n < count; ++n) {
    for (auto& c : choices) {
      c.first = int(rng() % nfs);
      c.second = int(rng() % nfn);
    }
    out.push_back(make_network(space, choices));
  }
  return out;
}

std::optional<std::string> validate_platform(const PlatformSpec& platform) {
  if (platform.num_fpgas < 1) return "num_fpgas must be >= 1";
  if (platform.dsp_per_fpga < 1) return "dsp_per_fpga must be >= 1";
  if (platform.clock_mhz <= 0) return "clock_mhz must be > 0";
  if (platform.rl_ms <= 0) return "rl_ms must be > 0";
  return std::nullopt;
}

std::string describe_network(const ChildNetwork& net) {
  std::ostringstream out;
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const auto& l = net.layers[i];
    if (i) out << '|';
    out << l.kh << 'x' << l.kw << 'x' << l.in_ch << 'x' << l.out_ch << 'x' << l.rows
        << 'x' << l.cols;
  }
  return out.str();
}

std::optional<ChildNetwork> parse_network_descriptor(const std::string& text) {
  ChildNetwork net;
  std::istringstream layers(text);
  std::string seg;
  while (std::getline(layers, seg, '|')) {
    ConvLayer l;
    char x1, x2, x3, x4, x5;
    std::istringstream fields(seg);
    if (!(fields >> l.kh >> x1 >> l.kw >> x2 >> l.in_ch >> x3 >> l.out_ch >> x4 >>
          l.rows >> x5 >> l.cols) ||
        x1 != 'x' || x2 != 'x' || x3 != 'x' || x4 != 'x' || x5 != 'x')
      return std::nullopt;
    std::string rest;
    if (fields >> rest) return std::nullopt;
    net.layers.push_back(l);
  }
  if (net.layers.empty()) return std::nullopt;
  return net;
}

}  // namespace tilenas
