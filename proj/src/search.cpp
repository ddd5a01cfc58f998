#include "tilenas/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <random>

#include "tilenas/analyzer.hpp"
#include "tilenas/design.hpp"
#include "tilenas/graph.hpp"

namespace tilenas {

Reward reward(std::optional<double> accuracy, double latency_ms, double rl_ms,
              double baseline) {
  if (latency_ms <= 0 || rl_ms <= 0)
    throw std::invalid_argument("latencies must be positive");
  if (latency_ms > rl_ms) {
    if (accuracy)
      throw std::invalid_argument("accuracy must be absent for pruned candidates");
    return {(rl_ms - latency_ms) / rl_ms - 1.0, true};
  }
  if (!accuracy)
    throw std::invalid_argument("accuracy required when latency meets the spec");
  return {(*accuracy - baseline) + latency_ms / rl_ms, false};
}

namespace {

// Analytical latency of one candidate, or nullopt when the design pipeline
// rejects it.
std::optional<double> candidate_latency_ms(const ChildNetwork& net,
                                           const PlatformSpec& platform,
                                           std::string* note) {
  try {
    TilingDesign design = build_design(net, platform);
    TileTaskGraph graph = build_graph(net, design);
    return analytical_latency(graph, platform).latency_ms;
  } catch (const std::exception& e) {
    if (note) *note = e.what();
    return std::nullopt;
  }
}

}  // namespace

namespace {

SearchTraceEntry finish_candidate(const ChildNetwork& net, const PlatformSpec& platform,
                                  AccuracyEvaluator& evaluator, BaselineEma& baseline,
                                  bool gate, double failed_reward,
                                  int64_t evaluator_calls_before,
                                  std::optional<double> latency, std::string note) {
  SearchTraceEntry entry;
  entry.net = net;
  entry.evaluator_calls = evaluator_calls_before;

  if (!latency) {
    entry.failed = true;
    entry.pruned = true;
    entry.reward_value = failed_reward;
    entry.note = note;
    return entry;
  }
  entry.latency_ms = *latency;

  bool violates = entry.latency_ms > platform.rl_ms;
  if (violates) {
    entry.pruned = true;
    entry.reward_value = reward(std::nullopt, entry.latency_ms, platform.rl_ms, 0.0).value;
    if (!gate) {
      // instrumentation mode: pay the training cost anyway, discard the result
      try {
        (void)evaluator.evaluate(net);
        entry.evaluator_calls++;
      } catch (const EvaluatorError&) {
        entry.evaluator_calls++;
      }
    }
    return entry;
  }

  try {
    double a = evaluator.evaluate(net);
    entry.evaluator_calls++;
    entry.accuracy = a;
    entry.reward_value = reward(a, entry.latency_ms, platform.rl_ms, baseline.value()).value;
    baseline.update(a);
  } catch (const EvaluatorError& e) {
    entry.evaluator_calls++;
    entry.failed = true;
    entry.accuracy.reset();
    entry.reward_value = failed_reward;
    entry.note = e.what();
  }
  return entry;
}

}  // namespace

SearchTraceEntry evaluate_candidate(const ChildNetwork& net, const PlatformSpec& platform,
                                    AccuracyEvaluator& evaluator, BaselineEma& baseline,
                                    bool gate, double failed_reward,
                                    int64_t evaluator_calls_before) {
  std::string note;
  auto latency = candidate_latency_ms(net, platform, &note);
  return finish_candidate(net, platform, evaluator, baseline, gate, failed_reward,
                          evaluator_calls_before, latency, std::move(note));
}

namespace {

double next_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

// Independent categorical softmax policies, one per (layer, parameter) slot.
class SlotPolicies {
 public:
  SlotPolicies(int slots, int choices) : logits_(slots, std::vector<double>(choices, 0.0)) {}

  std::vector<double> probs(int slot) const {
    const auto& l = logits_[slot];
    double mx = *std::max_element(l.begin(), l.end());
    std::vector<double> p(l.size());
    double sum = 0;
    for (size_t i = 0; i < l.size(); ++i) sum += p[i] = std::exp(l[i] - mx);
    for (auto& v : p) v /= sum;
    return p;
  }

  int sample(int slot, std::mt19937_64& rng) const {
    auto p = probs(slot);
    double u = next_uniform(rng);
    double acc = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return int(i);
    }
    return int(p.size()) - 1;
  }

  void update(int slot, int action, double reward_value, double lr) {
    auto p = probs(slot);
    auto& l = logits_[slot];
    for (size_t i = 0; i < l.size(); ++i)
      l[i] += lr * reward_value * ((int(i) == action ? 1.0 : 0.0) - p[i]);
  }

 private:
  std::vector<std::vector<double>> logits_;
};

}  // namespace

SearchResult run_search(const SearchSpace& space, const PlatformSpec& platform,
                        const SearchOptions& options, AccuracyEvaluator& evaluator) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (auto err = validate_space(space)) throw std::invalid_argument(*err);
  if (auto err = validate_platform(platform)) throw std::invalid_argument(*err);

  std::mt19937_64 rng(options.seed);
  BaselineEma baseline(options.ema_decay);
  const int nfs = int(space.filter_sizes.size());
  const int nfn = int(space.filter_counts.size());

  SlotPolicies fs_policy(space.num_layers, nfs);
  SlotPolicies fn_policy(space.num_layers, nfn);

  SearchResult result;
  result.trace.reserve(options.trials);

  // Random-strategy proposals do not depend on rewards, so they can be drawn up
  // front; that also lets the latency pipeline run in parallel without changing
  // any result.
  std::vector<ChildNetwork> proposals;
  std::vector<std::pair<std::optional<double>, std::string>> pre_latency;
  if (options.strategy == Strategy::Random) {
    proposals = sample_networks(space, options.seed, options.trials);
    pre_latency.resize(proposals.size());
    int workers = std::max(1, options.parallel);
    if (workers == 1) {
      for (size_t i = 0; i < proposals.size(); ++i)
        pre_latency[i].first = candidate_latency_ms(proposals[i], platform,
                                                    &pre_latency[i].second);
    } else {
      std::vector<std::future<void>> jobs;
      std::atomic<size_t> next{0};
      for (int w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&]() {
          for (size_t i = next.fetch_add(1); i < proposals.size(); i = next.fetch_add(1))
            pre_latency[i].first = candidate_latency_ms(proposals[i], platform,
                                                        &pre_latency[i].second);
        }));
      }
      for (auto& j : jobs) j.get();
    }
  }

  int64_t calls = 0;
  for (int trial = 1; trial <= options.trials; ++trial) {
    ChildNetwork net;
    std::vector<std::pair<int, int>> actions(space.num_layers);
    if (options.strategy == Strategy::Reinforce) {
      for (int i = 0; i < space.num_layers; ++i) {
        actions[i].first = fs_policy.sample(i, rng);
        actions[i].second = fn_policy.sample(i, rng);
      }
      net = make_network(space, actions);
    } else {
      net = proposals[trial - 1];
    }

    SearchTraceEntry entry =
        options.strategy == Strategy::Random
            ? finish_candidate(net, platform, evaluator, baseline, options.gate,
                               options.failed_reward, calls, pre_latency[trial - 1].first,
                               pre_latency[trial - 1].second)
            : evaluate_candidate(net, platform, evaluator, baseline, options.gate,
                                 options.failed_reward, calls);
    entry.trial = trial;
    calls = entry.evaluator_calls;

    if (options.strategy == Strategy::Reinforce) {
      for (int i = 0; i < space.num_layers; ++i) {
        fs_policy.update(i, actions[i].first, entry.reward_value, options.learning_rate);
        fn_policy.update(i, actions[i].second, entry.reward_value, options.learning_rate);
      }
    }

    if (!entry.pruned && !entry.failed &&
        (!result.best || entry.reward_value > result.best->reward_value))
      result.best = entry;
    result.trace.push_back(std::move(entry));
  }
  result.evaluator_calls = calls;
  return result;
}

}  // namespace tilenas
