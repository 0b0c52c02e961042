#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthnet/network.hpp"
#include "synthnet/rng.hpp"

namespace synthnet {

enum class Strategy {
  dense,
  prune_only,
  subnet_only,
  random_synth,
  strategic_synth,
  random_synth_prune,
  strategic_synth_prune,
};

const std::vector<Strategy>& all_strategies();
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

bool starts_from_subnetwork(Strategy s);
bool uses_pruning(Strategy s);
bool uses_synthesis(Strategy s);

// An enabled connection among the top-N by |weight|; the seed point for
// strategic synthesis.
struct FocalJuncture {
  Connection conn;
  double weight = 0.0;     // signed stored value, copied on synthesis
  double magnitude = 0.0;  // |weight|
};

enum class SynthesisMode { random, strategic };
enum class InitStrategy { copy, uniform };

std::string to_string(InitStrategy s);
InitStrategy init_strategy_from_string(const std::string& name);

struct SynthesisPolicy {
  SynthesisMode mode = SynthesisMode::strategic;
  int n_targets = 4;
  int max_resamples = 10;
  InitStrategy init_strategy = InitStrategy::copy;
  int random_count = 4;  // connections per cycle for random synthesis
};

struct CompressionSchedule {
  Strategy strategy = Strategy::dense;
  double sparsity_threshold = 0.9;  // target sparsity S
  int cycle_period = 1;             // epochs between structural cycles
  int stop_delay = 0;               // trailing epochs with structure frozen
  SynthesisPolicy policy;
};

enum class EventKind { prune, synthesize };

struct StructuralEvent {
  int epoch = 0;
  EventKind kind = EventKind::prune;
  std::vector<Connection> connections;
  double sparsity_after = 0.0;
};

// One random walk from every input neuron to the output. Walks merge where
// they meet: a visited neuron keeps a single outgoing connection, so paths
// that touch the same neuron share its continuation.
ConnectionMask init_subnetwork_mask(const Architecture& arch, std::uint64_t seed);

// disabled / total, in [0,1].
double sparsity(const ConnectionMask& mask);

// floor((1-S) * total): the maximum enabled connections permitted at
// threshold S. Pruning drives the enabled count down to this; synthesis may
// not grow past it.
long enabled_budget(double threshold, long total);

// Disables the smallest-|weight| enabled connections (global across layers)
// until the enabled count is within budget, zeroing their weights. Ties
// resolved toward keeping lexicographically smaller coordinates.
StructuralEvent prune_constant(MaskedNetwork& net, double threshold);

// The min(n, enabled) enabled connections of largest |weight|, descending;
// ties broken by (layer, origin, terminus).
std::vector<FocalJuncture> rank_focal_junctures(const MaskedNetwork& net, int n);

// Normalized standard Gaussian over terminus indices 0..width-1, centred at
// the origin index beta.
std::vector<double> gaussian_terminus_distribution(int beta, int width);

StructuralEvent synthesize_strategic(MaskedNetwork& net, const SynthesisPolicy& policy,
                                     double threshold, Rng& rng);

StructuralEvent synthesize_random(MaskedNetwork& net, int count, double threshold,
                                  Rng& rng);

// Runs the strategy's structural step(s) for this epoch. Pruning always
// precedes synthesis so freshly made connections survive the cycle that
// created them. No-op unless epoch is a cycle boundary outside the
// stop-delay window. Events are returned even when empty; callers decide
// what to log.
std::vector<StructuralEvent> apply_cycle(MaskedNetwork& net,
                                         const CompressionSchedule& schedule, int epoch,
                                         int total_epochs, Rng& rng);

}  // namespace synthnet
