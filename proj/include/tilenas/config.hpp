#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "tilenas/arch.hpp"
#include "tilenas/search.hpp"

namespace tilenas {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One run's worth of settings, read from a sectioned key-value text file.
// `analyze`/`simulate`/`export-graph` need an explicit [network] section,
// `search` needs a [space] section.
struct RunConfig {
  PlatformSpec platform;
  std::optional<SearchSpace> space;
  std::optional<ChildNetwork> network;

  Strategy strategy = Strategy::Reinforce;
  int trials = 60;
  uint64_t seed = 0;
  double learning_rate = 0.05;
  double ema_decay = 0.95;
  bool gate = true;
  double failed_reward = -2.0;
  uint64_t exhaustive_cap = kDefaultExhaustiveCap;

  std::string evaluator = "surrogate";  // "surrogate" or "command <cmdline>"
  double surrogate_noise = 0.0;
  double evaluator_timeout_sec = 600.0;

  bool operator==(const RunConfig&) const = default;

  SearchOptions search_options() const {
    SearchOptions o;
    o.strategy = strategy;
    o.trials = trials;
    o.seed = seed;
    o.learning_rate = learning_rate;
    o.ema_decay = ema_decay;
    o.gate = gate;
    o.failed_reward = failed_reward;
    return o;
  }
};

// Throws ConfigError with the offending line/field named.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

// Builds the configured accuracy evaluator.
std::unique_ptr<AccuracyEvaluator> make_evaluator(const RunConfig& config);

}  // namespace tilenas
