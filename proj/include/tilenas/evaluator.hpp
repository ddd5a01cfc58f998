#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tilenas/arch.hpp"

namespace tilenas {

class EvaluatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pluggable accuracy oracle: maps a network descriptor to an accuracy in [0,1].
// Implementations must be safe to call concurrently.
class AccuracyEvaluator {
 public:
  virtual ~AccuracyEvaluator() = default;
  virtual double evaluate(const ChildNetwork& net) = 0;  // throws EvaluatorError
};

// Deterministic stand-in for training: accuracy grows monotonically with total
// MAC count and depth, a = 1 - exp(-(macs/mac_scale + depth_weight * layers)).
// Optional seeded noise stays deterministic per network.
class SurrogateEvaluator : public AccuracyEvaluator {
 public:
  explicit SurrogateEvaluator(double noise = 0.0, uint64_t seed = 0,
                              double mac_scale = 1e8, double depth_weight = 0.05)
      : noise_(noise), seed_(seed), mac_scale_(mac_scale), depth_weight_(depth_weight) {}

  double evaluate(const ChildNetwork& net) override;

 private:
  double noise_;
  uint64_t seed_;
  double mac_scale_;
  double depth_weight_;
};

// Spawns a user command, feeds the network descriptor on stdin (one
// "layer <i> kh <..> kw <..> n <..> m <..> r <..> c <..>" line per layer) and
// reads a single decimal accuracy from stdout. Nonzero exit, malformed output
// or timeout raise EvaluatorError.
class CommandEvaluator : public AccuracyEvaluator {
 public:
  explicit CommandEvaluator(std::string command, double timeout_sec = 600.0)
      : command_(std::move(command)), timeout_sec_(timeout_sec) {}

  double evaluate(const ChildNetwork& net) override;

  static std::string protocol_input(const ChildNetwork& net);

 private:
  std::string command_;
  double timeout_sec_;
};

}  // namespace tilenas
