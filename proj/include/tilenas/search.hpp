#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilenas/arch.hpp"
#include "tilenas/evaluator.hpp"

namespace tilenas {

struct Reward {
  double value = 0.0;
  bool pruned = false;  // latency exceeded the spec, training skipped
};

// Two-branch reward: (rL - L)/rL - 1 when L > rL (strictly negative, no
// accuracy), otherwise (A - b) + L/rL. A must be present exactly when L <= rL.
Reward reward(std::optional<double> accuracy, double latency_ms, double rl_ms,
              double baseline);

// Exponential moving average of evaluated accuracies; contributes 0 before the
// first update, the first update seeds the average.
class BaselineEma {
 public:
  explicit BaselineEma(double decay = 0.95) : decay_(decay) {}

  void update(double accuracy) {
    if (!initialized_) {
      value_ = accuracy;
      initialized_ = true;
    } else {
      value_ = decay_ * value_ + (1.0 - decay_) * accuracy;
    }
  }
  double value() const { return initialized_ ? value_ : 0.0; }
  bool initialized() const { return initialized_; }

 private:
  double decay_;
  double value_ = 0.0;
  bool initialized_ = false;
};

struct SearchTraceEntry {
  int trial = 0;                      // 1-based
  ChildNetwork net;
  double latency_ms = 0.0;            // 0 when the design itself failed
  bool pruned = false;
  bool failed = false;                // infeasible design or evaluator failure
  std::optional<double> accuracy;     // absent for pruned/failed entries
  double reward_value = 0.0;
  int64_t evaluator_calls = 0;        // cumulative count after this trial
  std::string note;                   // diagnostic for failed entries
};

enum class Strategy { Reinforce, Random };

struct SearchOptions {
  Strategy strategy = Strategy::Reinforce;
  int trials = 60;
  uint64_t seed = 0;
  double learning_rate = 0.05;
  double ema_decay = 0.95;
  bool gate = true;            // skip the evaluator for latency-violating candidates
  double failed_reward = -2.0; // reward for infeasible designs / failed evaluations
  int parallel = 1;            // latency evaluation threads (random strategy only)
};

struct SearchResult {
  std::vector<SearchTraceEntry> trace;
  std::optional<SearchTraceEntry> best;  // highest-reward non-pruned entry
  int64_t evaluator_calls = 0;
};

// Full per-candidate pipeline: design -> graph -> schedule -> analytical
// latency, then (unless gated out) one evaluator call, EMA update and reward.
// `evaluator_calls_before` seeds the entry's cumulative counter.
SearchTraceEntry evaluate_candidate(const ChildNetwork& net, const PlatformSpec& platform,
                                    AccuracyEvaluator& evaluator, BaselineEma& baseline,
                                    bool gate, double failed_reward,
                                    int64_t evaluator_calls_before = 0);

// Latency-gated architecture search. The reinforce strategy keeps one
// categorical softmax per layer-parameter slot and applies the policy-gradient
// update with every trial's reward (pruned candidates included, steering the
// controller away from infeasible regions). Deterministic for a fixed seed.
SearchResult run_search(const SearchSpace& space, const PlatformSpec& platform,
                        const SearchOptions& options, AccuracyEvaluator& evaluator);

}  // namespace tilenas
