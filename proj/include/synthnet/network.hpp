#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "synthnet/dataset.hpp"
#include "synthnet/matrix.hpp"

namespace synthnet {

struct Architecture {
  std::vector<int> widths;

  int pairs() const { return static_cast<int>(widths.size()) - 1; }
  long total_connections() const;
  bool valid() const;
  bool operator==(const Architecture&) const = default;
};

// One connection: neuron `origin` in layer `layer` -> neuron `terminus` in
// layer `layer + 1`. Ordering is lexicographic (layer, origin, terminus).
struct Connection {
  int layer = 0;
  int origin = 0;
  int terminus = 0;
  auto operator<=>(const Connection&) const = default;
};

class ConnectionMask {
 public:
  ConnectionMask() = default;
  ConnectionMask(const Architecture& arch, bool enabled);

  bool at(int layer, int origin, int terminus) const {
    return bits_[layer][static_cast<std::size_t>(origin) * widths_[layer + 1] + terminus] != 0;
  }
  void set(int layer, int origin, int terminus, bool enabled) {
    bits_[layer][static_cast<std::size_t>(origin) * widths_[layer + 1] + terminus] =
        enabled ? 1 : 0;
  }

  long total() const;
  long enabled_count() const;
  long disabled_count() const { return total() - enabled_count(); }
  std::vector<Connection> enabled_connections() const;
  std::vector<Connection> disabled_connections() const;

  int pairs() const { return static_cast<int>(widths_.size()) - 1; }
  const std::vector<int>& widths() const { return widths_; }
  bool same_shape(const ConnectionMask& other) const { return widths_ == other.widths_; }

  bool operator==(const ConnectionMask&) const = default;

 private:
  std::vector<int> widths_;
  std::vector<std::vector<std::uint8_t>> bits_;  // bits_[k][origin * out_width + terminus]
};

struct MaskedNetwork {
  Architecture arch;
  std::vector<Matrix> weights;              // weights[k]: widths[k] x widths[k+1]
  std::vector<std::vector<double>> biases;  // biases[k]: layer k+1 (never masked)
  ConnectionMask mask;

  void zero_disabled_weights();
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t rng_seed = 0;
};

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double glorot_bound(int fan_in, int fan_out);

// Fully enabled network, weights uniform in +-glorot_bound per layer, biases
// zero. Same seed gives bit-identical weights; every strategy for a seed
// derives from this network.
MaskedNetwork init_dense(const Architecture& arch, std::uint64_t seed);

struct ForwardResult {
  std::vector<Matrix> activations;  // [0] = input batch, back() = output scores
  std::vector<double> scores() const;
};

// ReLU hidden layers, sigmoid output. Disabled connections contribute
// exactly nothing regardless of the stored weight value.
ForwardResult forward(const MaskedNetwork& net, const Matrix& batch);

std::vector<double> predict(const MaskedNetwork& net, const Matrix& batch);

// Mean binary cross-entropy; scores clamped away from {0,1}.
double bce_loss(const std::vector<double>& scores, const std::vector<int>& labels);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Exact gradients of the mean BCE over the batch; disabled-connection
// gradients are exactly 0.
Gradients backward(const MaskedNetwork& net, const Matrix& batch,
                   const std::vector<int>& labels);
Gradients backward_from(const MaskedNetwork& net, const ForwardResult& fr,
                        const std::vector<int>& labels);

// Called after every epoch with that epoch's mean mini-batch loss; the
// compression scheduler attaches here.
using EpochHook = std::function<void(int epoch, double train_loss, MaskedNetwork& net)>;

// Seeded-shuffle mini-batch gradient descent. Throws TrainingDiverged on a
// non-finite batch loss.
void train(MaskedNetwork& net, const SplitDataset& data, const TrainConfig& cfg,
           const EpochHook& hook);

}  // namespace synthnet
