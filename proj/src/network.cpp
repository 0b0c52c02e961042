#include "synthnet/network.hpp"

#include <cmath>
#include <sstream>

#include "synthnet/rng.hpp"

namespace synthnet {

long Architecture::total_connections() const {
  long total = 0;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k)
    total += static_cast<long>(widths[k]) * widths[k + 1];
  return total;
}

bool Architecture::valid() const {
  if (widths.size() < 2) return false;
  for (int w : widths)
    if (w < 1) return false;
  return true;
}

ConnectionMask::ConnectionMask(const Architecture& arch, bool enabled) {
  if (!arch.valid()) throw std::invalid_argument("ConnectionMask: invalid architecture");
  widths_ = arch.widths;
  bits_.resize(arch.pairs());
  for (int k = 0; k < arch.pairs(); ++k)
    bits_[k].assign(static_cast<std::size_t>(widths_[k]) * widths_[k + 1], enabled ? 1 : 0);
}

long ConnectionMask::total() const {
  long total = 0;
  for (const auto& layer : bits_) total += static_cast<long>(layer.size());
  return total;
}

long ConnectionMask::enabled_count() const {
  long count = 0;
  for (const auto& layer : bits_)
    for (auto b : layer) count += b;
  return count;
}

std::vector<Connection> ConnectionMask::enabled_connections() const {
  std::vector<Connection> out;
  for (int k = 0; k < pairs(); ++k)
    for (int i = 0; i < widths_[k]; ++i)
      for (int j = 0; j < widths_[k + 1]; ++j)
        if (at(k, i, j)) out.push_back({k, i, j});
  return out;
}

std::vector<Connection> ConnectionMask::disabled_connections() const {
  std::vector<Connection> out;
  for (int k = 0; k < pairs(); ++k)
    for (int i = 0; i < widths_[k]; ++i)
      for (int j = 0; j < widths_[k + 1]; ++j)
        if (!at(k, i, j)) out.push_back({k, i, j});
  return out;
}

void MaskedNetwork::zero_disabled_weights() {
  for (int k = 0; k < arch.pairs(); ++k)
    for (int i = 0; i < arch.widths[k]; ++i)
      for (int j = 0; j < arch.widths[k + 1]; ++j)
        if (!mask.at(k, i, j)) weights[k].at(i, j) = 0.0;
}

double glorot_bound(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (fan_in + fan_out));
}

MaskedNetwork init_dense(const Architecture& arch, std::uint64_t seed) {
  if (!arch.valid()) throw std::invalid_argument("init_dense: invalid architecture");
  MaskedNetwork net;
  net.arch = arch;
  net.mask = ConnectionMask(arch, true);
  Rng rng(seed);
  for (int k = 0; k < arch.pairs(); ++k) {
    const int in = arch.widths[k], out = arch.widths[k + 1];
    const double b = glorot_bound(in, out);
    Matrix w(in, out);
    for (int i = 0; i < in; ++i)
      for (int j = 0; j < out; ++j) w.at(i, j) = rng.uniform(-b, b);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(out, 0.0);
  }
  return net;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Effective weights: stored value where enabled, exact 0 where disabled.
Matrix effective_weights(const MaskedNetwork& net, int k) {
  const int in = net.arch.widths[k], out = net.arch.widths[k + 1];
  Matrix w(in, out);
  for (int i = 0; i < in; ++i)
    for (int j = 0; j < out; ++j)
      w.at(i, j) = net.mask.at(k, i, j) ? net.weights[k].at(i, j) : 0.0;
  return w;
}

}  // namespace

std::vector<double> ForwardResult::scores() const {
  const Matrix& out = activations.back();
  std::vector<double> s(out.rows);
  for (int r = 0; r < out.rows; ++r) s[r] = out.at(r, 0);
  return s;
}

ForwardResult forward(const MaskedNetwork& net, const Matrix& batch) {
  if (batch.cols != net.arch.widths.front()) {
    std::ostringstream msg;
    msg << "forward: batch width " << batch.cols << " != input width "
        << net.arch.widths.front();
    throw std::invalid_argument(msg.str());
  }
  ForwardResult fr;
  fr.activations.reserve(net.arch.widths.size());
  fr.activations.push_back(batch);
  const int pairs = net.arch.pairs();
  for (int k = 0; k < pairs; ++k) {
    const Matrix w = effective_weights(net, k);
    const Matrix& a = fr.activations.back();
    const int out = net.arch.widths[k + 1];
    Matrix z(batch.rows, out);
    for (int r = 0; r < batch.rows; ++r) {
      for (int j = 0; j < out; ++j) z.at(r, j) = net.biases[k][j];
      for (int i = 0; i < w.rows; ++i) {
        const double ai = a.at(r, i);
        for (int j = 0; j < out; ++j) z.at(r, j) += ai * w.at(i, j);
      }
    }
    const bool last = (k == pairs - 1);
    for (double& v : z.data) v = last ? sigmoid(v) : std::max(0.0, v);
    fr.activations.push_back(std::move(z));
  }
  return fr;
}

std::vector<double> predict(const MaskedNetwork& net, const Matrix& batch) {
  if (net.arch.widths.back() != 1)
    throw std::logic_error("predict: output layer must have width 1");
  return forward(net, batch).scores();
}

double bce_loss(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("bce_loss: length mismatch");
  if (scores.empty()) throw std::invalid_argument("bce_loss: empty input");
  constexpr double eps = 1e-12;
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double p = std::min(std::max(scores[i], eps), 1.0 - eps);
    sum += labels[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return sum / static_cast<double>(scores.size());
}

Gradients backward_from(const MaskedNetwork& net, const ForwardResult& fr,
                        const std::vector<int>& labels) {
  const int pairs = net.arch.pairs();
  const int n = fr.activations.front().rows;
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("backward: label count mismatch");

  Gradients g;
  g.weights.resize(pairs);
  g.biases.resize(pairs);

  // Output delta for sigmoid + mean BCE.
  Matrix delta(n, 1);
  const Matrix& p = fr.activations.back();
  for (int r = 0; r < n; ++r) delta.at(r, 0) = (p.at(r, 0) - labels[r]) / n;

  for (int k = pairs - 1; k >= 0; --k) {
    const Matrix& a = fr.activations[k];
    const int in = net.arch.widths[k], out = net.arch.widths[k + 1];

    Matrix gw(in, out);
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < in; ++i) {
        const double ai = a.at(r, i);
        for (int j = 0; j < out; ++j) gw.at(i, j) += ai * delta.at(r, j);
      }
    for (int i = 0; i < in; ++i)
      for (int j = 0; j < out; ++j)
        if (!net.mask.at(k, i, j)) gw.at(i, j) = 0.0;
    g.weights[k] = std::move(gw);

    std::vector<double> gb(out, 0.0);
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < out; ++j) gb[j] += delta.at(r, j);
    g.biases[k] = std::move(gb);

    if (k > 0) {
      const Matrix w = effective_weights(net, k);
      Matrix next(n, in);
      for (int r = 0; r < n; ++r)
        for (int i = 0; i < in; ++i) {
          double s = 0.0;
          for (int j = 0; j < out; ++j) s += w.at(i, j) * delta.at(r, j);
          // ReLU gate: a > 0 iff the pre-activation was positive.
          next.at(r, i) = (a.at(r, i) > 0.0) ? s : 0.0;
        }
      delta = std::move(next);
    }
  }
  return g;
}

Gradients backward(const MaskedNetwork& net, const Matrix& batch,
                   const std::vector<int>& labels) {
  return backward_from(net, forward(net, batch), labels);
}

void train(MaskedNetwork& net, const SplitDataset& data, const TrainConfig& cfg,
           const EpochHook& hook) {
  const Matrix& x = data.train.features;
  const std::vector<int>& y = data.train.labels;
  const int n = x.rows;
  if (cfg.learning_rate < 0) throw std::invalid_argument("train: negative learning rate");
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be positive");
  if (cfg.batch_size < 1 || cfg.batch_size > n)
    throw std::invalid_argument("train: batch_size must be in [1, training size]");

  Rng rng(cfg.rng_seed);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    int batches = 0;
    for (int start = 0; start < n; start += cfg.batch_size) {
      const int end = std::min(n, start + cfg.batch_size);
      Matrix bx(end - start, x.cols);
      std::vector<int> by(end - start);
      for (int r = start; r < end; ++r) {
        for (int c = 0; c < x.cols; ++c) bx.at(r - start, c) = x.at(order[r], c);
        by[r - start] = y[order[r]];
      }

      ForwardResult fr = forward(net, bx);
      const double loss = bce_loss(fr.scores(), by);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "training diverged: non-finite loss at epoch " << epoch << ", batch "
            << batches;
        throw TrainingDiverged(msg.str());
      }
      loss_sum += loss;
      ++batches;

      Gradients g = backward_from(net, fr, by);
      for (int k = 0; k < net.arch.pairs(); ++k) {
        for (std::size_t i = 0; i < net.weights[k].data.size(); ++i)
          net.weights[k].data[i] -= cfg.learning_rate * g.weights[k].data[i];
        for (std::size_t j = 0; j < net.biases[k].size(); ++j)
          net.biases[k][j] -= cfg.learning_rate * g.biases[k][j];
      }
    }
    if (hook) hook(epoch, loss_sum / batches, net);
  }
}

}  // namespace synthnet
