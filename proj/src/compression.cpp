#include "synthnet/compression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace synthnet {

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all = {
      Strategy::dense,           Strategy::prune_only,
      Strategy::subnet_only,     Strategy::random_synth,
      Strategy::strategic_synth, Strategy::random_synth_prune,
      Strategy::strategic_synth_prune,
  };
  return all;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::dense: return "dense";
    case Strategy::prune_only: return "prune_only";
    case Strategy::subnet_only: return "subnet_only";
    case Strategy::random_synth: return "random_synth";
    case Strategy::strategic_synth: return "strategic_synth";
    case Strategy::random_synth_prune: return "random_synth_prune";
    case Strategy::strategic_synth_prune: return "strategic_synth_prune";
  }
  throw std::logic_error("unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
  for (Strategy s : all_strategies())
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

bool starts_from_subnetwork(Strategy s) {
  return s == Strategy::subnet_only || s == Strategy::random_synth ||
         s == Strategy::strategic_synth || s == Strategy::random_synth_prune ||
         s == Strategy::strategic_synth_prune;
}

bool uses_pruning(Strategy s) {
  return s == Strategy::prune_only || s == Strategy::random_synth_prune ||
         s == Strategy::strategic_synth_prune;
}

bool uses_synthesis(Strategy s) {
  return s == Strategy::random_synth || s == Strategy::strategic_synth ||
         s == Strategy::random_synth_prune || s == Strategy::strategic_synth_prune;
}

std::string to_string(InitStrategy s) {
  return s == InitStrategy::copy ? "copy" : "uniform";
}

InitStrategy init_strategy_from_string(const std::string& name) {
  if (name == "copy") return InitStrategy::copy;
  if (name == "uniform") return InitStrategy::uniform;
  throw std::invalid_argument("unknown init strategy '" + name + "'");
}

ConnectionMask init_subnetwork_mask(const Architecture& arch, std::uint64_t seed) {
  if (!arch.valid()) throw std::invalid_argument("init_subnetwork_mask: invalid architecture");
  ConnectionMask mask(arch, false);
  Rng rng(seed);
  // next_hop[k][i]: the single outgoing connection of neuron i in layer k,
  // fixed the first time any walk visits it. Walks that meet share the
  // continuation, so every visited neuron keeps one outgoing connection.
  std::vector<std::vector<int>> next_hop(arch.pairs());
  for (int k = 0; k < arch.pairs(); ++k) next_hop[k].assign(arch.widths[k], -1);

  for (int input = 0; input < arch.widths[0]; ++input) {
    int cur = input;
    for (int k = 0; k < arch.pairs(); ++k) {
      if (next_hop[k][cur] < 0) next_hop[k][cur] = rng.index(arch.widths[k + 1]);
      mask.set(k, cur, next_hop[k][cur], true);
      cur = next_hop[k][cur];
    }
  }
  return mask;
}

double sparsity(const ConnectionMask& mask) {
  return static_cast<double>(mask.disabled_count()) / static_cast<double>(mask.total());
}

long enabled_budget(double threshold, long total) {
  if (threshold < 0.0 || threshold > 1.0)
    throw std::invalid_argument("enabled_budget: threshold outside [0,1]");
  // The epsilon tolerates FP noise when (1-S)*total is an exact integer.
  return static_cast<long>(std::floor((1.0 - threshold) * static_cast<double>(total) + 1e-9));
}

namespace {

struct RankedConnection {
  Connection conn;
  double weight;
};

// Total order used by both pruning and juncture ranking: larger |weight|
// first, ties toward lexicographically smaller coordinates.
bool keep_before(const RankedConnection& a, const RankedConnection& b) {
  const double ma = std::abs(a.weight), mb = std::abs(b.weight);
  if (ma != mb) return ma > mb;
  return a.conn < b.conn;
}

std::vector<RankedConnection> enabled_ranked(const MaskedNetwork& net) {
  std::vector<RankedConnection> list;
  for (const Connection& c : net.mask.enabled_connections())
    list.push_back({c, net.weights[c.layer].at(c.origin, c.terminus)});
  std::sort(list.begin(), list.end(), keep_before);
  return list;
}

}  // namespace

StructuralEvent prune_constant(MaskedNetwork& net, double threshold) {
  StructuralEvent ev;
  ev.kind = EventKind::prune;
  const long budget = enabled_budget(threshold, net.mask.total());
  auto ranked = enabled_ranked(net);
  const long enabled = static_cast<long>(ranked.size());
  if (enabled > budget) {
    for (long r = budget; r < enabled; ++r) {
      const Connection& c = ranked[r].conn;
      net.mask.set(c.layer, c.origin, c.terminus, false);
      net.weights[c.layer].at(c.origin, c.terminus) = 0.0;
      ev.connections.push_back(c);
    }
    std::sort(ev.connections.begin(), ev.connections.end());
  }
  ev.sparsity_after = sparsity(net.mask);
  return ev;
}

std::vector<FocalJuncture> rank_focal_junctures(const MaskedNetwork& net, int n) {
  if (n < 1) throw std::invalid_argument("rank_focal_junctures: n must be >= 1");
  auto ranked = enabled_ranked(net);
  if (ranked.empty())
    throw std::runtime_error("rank_focal_junctures: network has no enabled connections");
  const std::size_t count = std::min<std::size_t>(n, ranked.size());
  std::vector<FocalJuncture> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r)
    out.push_back({ranked[r].conn, ranked[r].weight, std::abs(ranked[r].weight)});
  return out;
}

std::vector<double> gaussian_terminus_distribution(int beta, int width) {
  if (width < 1) throw std::invalid_argument("gaussian_terminus_distribution: width < 1");
  if (beta < 0) throw std::invalid_argument("gaussian_terminus_distribution: beta < 0");
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  std::vector<double> p(width);
  double sum = 0.0;
  for (int x = 0; x < width; ++x) {
    const double d = static_cast<double>(x) - static_cast<double>(beta);
    p[x] = inv_sqrt_2pi * std::exp(-0.5 * d * d);
    sum += p[x];
  }
  for (double& v : p) v /= sum;
  return p;
}

StructuralEvent synthesize_strategic(MaskedNetwork& net, const SynthesisPolicy& policy,
                                     double threshold, Rng& rng) {
  StructuralEvent ev;
  ev.kind = EventKind::synthesize;
  const long budget = enabled_budget(threshold, net.mask.total());
  long enabled = net.mask.enabled_count();
  if (enabled < budget && enabled > 0) {
    // Junctures are ranked once on the pre-synthesis snapshot.
    const auto targets = rank_focal_junctures(net, policy.n_targets);
    for (const FocalJuncture& t : targets) {
      if (enabled >= budget) break;
      const int k = t.conn.layer;
      const int origin = t.conn.origin;
      const auto probs =
          gaussian_terminus_distribution(origin, net.arch.widths[k + 1]);
      for (int attempt = 0; attempt <= policy.max_resamples; ++attempt) {
        const int x = rng.discrete(probs);
        if (net.mask.at(k, origin, x)) continue;  // collision: resample
        const double w = policy.init_strategy == InitStrategy::copy
                             ? t.weight
                             : rng.uniform(-glorot_bound(net.arch.widths[k],
                                                         net.arch.widths[k + 1]),
                                           glorot_bound(net.arch.widths[k],
                                                        net.arch.widths[k + 1]));
        net.mask.set(k, origin, x, true);
        net.weights[k].at(origin, x) = w;
        ev.connections.push_back({k, origin, x});
        ++enabled;
        break;
      }
    }
  }
  ev.sparsity_after = sparsity(net.mask);
  return ev;
}

StructuralEvent synthesize_random(MaskedNetwork& net, int count, double threshold,
                                  Rng& rng) {
  StructuralEvent ev;
  ev.kind = EventKind::synthesize;
  const long budget = enabled_budget(threshold, net.mask.total());
  const long headroom = budget - net.mask.enabled_count();
  if (headroom > 0 && count > 0) {
    auto candidates = net.mask.disabled_connections();
    const long n_new = std::min<long>({headroom, count, static_cast<long>(candidates.size())});
    // Partial Fisher-Yates: sample without replacement.
    for (long t = 0; t < n_new; ++t) {
      const long pick = t + rng.index(static_cast<int>(candidates.size() - t));
      std::swap(candidates[t], candidates[pick]);
      const Connection& c = candidates[t];
      const double b = glorot_bound(net.arch.widths[c.layer], net.arch.widths[c.layer + 1]);
      net.mask.set(c.layer, c.origin, c.terminus, true);
      net.weights[c.layer].at(c.origin, c.terminus) = rng.uniform(-b, b);
      ev.connections.push_back(c);
    }
  }
  ev.sparsity_after = sparsity(net.mask);
  return ev;
}

std::vector<StructuralEvent> apply_cycle(MaskedNetwork& net,
                                         const CompressionSchedule& schedule, int epoch,
                                         int total_epochs, Rng& rng) {
  if (schedule.cycle_period < 1)
    throw std::invalid_argument("apply_cycle: cycle_period must be >= 1");
  if (schedule.stop_delay < 0)
    throw std::invalid_argument("apply_cycle: stop_delay must be >= 0");

  std::vector<StructuralEvent> events;
  if (epoch % schedule.cycle_period != 0) return events;
  if (epoch >= total_epochs - schedule.stop_delay) return events;  // structure frozen

  const double s = schedule.sparsity_threshold;
  if (uses_pruning(schedule.strategy)) events.push_back(prune_constant(net, s));
  if (uses_synthesis(schedule.strategy)) {
    if (schedule.strategy == Strategy::random_synth ||
        schedule.strategy == Strategy::random_synth_prune)
      events.push_back(synthesize_random(net, schedule.policy.random_count, s, rng));
    else
      events.push_back(synthesize_strategic(net, schedule.policy, s, rng));
  }
  for (auto& ev : events) ev.epoch = epoch;
  return events;
}

}  // namespace synthnet
