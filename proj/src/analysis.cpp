#include "synthnet/analysis.hpp"

#include <stdexcept>

namespace synthnet {

double mask_similarity(const ConnectionMask& a, const ConnectionMask& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("mask_similarity: architecture mismatch");
  long inter = 0, uni = 0;
  for (int k = 0; k < a.pairs(); ++k)
    for (int i = 0; i < a.widths()[k]; ++i)
      for (int j = 0; j < a.widths()[k + 1]; ++j) {
        const bool ea = a.at(k, i, j), eb = b.at(k, i, j);
        inter += (ea && eb);
        uni += (ea || eb);
      }
  if (uni == 0) return 1.0;  // both empty
  return static_cast<double>(inter) / static_cast<double>(uni);
}

SimilarityMatrix similarity_matrix(const std::vector<ConnectionMask>& masks,
                                   const std::vector<std::string>& labels) {
  if (masks.size() < 2)
    throw std::invalid_argument("similarity_matrix: need at least two masks");
  if (masks.size() != labels.size())
    throw std::invalid_argument("similarity_matrix: label count mismatch");
  const int n = static_cast<int>(masks.size());
  SimilarityMatrix m;
  m.labels = labels;
  m.values = Matrix(n, n);
  for (int r = 0; r < n; ++r) {
    m.values.at(r, r) = 1.0;
    for (int c = r + 1; c < n; ++c) {
      const double s = mask_similarity(masks[r], masks[c]);
      m.values.at(r, c) = s;
      m.values.at(c, r) = s;
    }
  }
  return m;
}

namespace {

void check_shape(const ConnectionMask& mask, const Architecture& arch) {
  if (mask.widths() != arch.widths)
    throw std::invalid_argument("mask does not match architecture");
}

// reach[k][i]: neuron i in layer k lies on an enabled path from some input.
std::vector<std::vector<char>> forward_reach(const ConnectionMask& mask) {
  const auto& w = mask.widths();
  std::vector<std::vector<char>> reach(w.size());
  reach[0].assign(w[0], 1);
  for (std::size_t k = 1; k < w.size(); ++k) reach[k].assign(w[k], 0);
  for (int k = 0; k < mask.pairs(); ++k)
    for (int i = 0; i < w[k]; ++i)
      if (reach[k][i])
        for (int j = 0; j < w[k + 1]; ++j)
          if (mask.at(k, i, j)) reach[k + 1][j] = 1;
  return reach;
}

// reach[k][i]: some enabled path leads from neuron i to the output layer.
std::vector<std::vector<char>> backward_reach(const ConnectionMask& mask) {
  const auto& w = mask.widths();
  std::vector<std::vector<char>> reach(w.size());
  reach.back().assign(w.back(), 1);
  for (std::size_t k = 0; k + 1 < w.size(); ++k) reach[k].assign(w[k], 0);
  for (int k = mask.pairs() - 1; k >= 0; --k)
    for (int i = 0; i < w[k]; ++i)
      for (int j = 0; j < w[k + 1]; ++j)
        if (mask.at(k, i, j) && reach[k + 1][j]) {
          reach[k][i] = 1;
          break;
        }
  return reach;
}

}  // namespace

std::vector<Connection> find_redundant(const ConnectionMask& mask,
                                       const Architecture& arch) {
  check_shape(mask, arch);
  const auto fwd = forward_reach(mask);
  const auto bwd = backward_reach(mask);
  std::vector<Connection> out;
  for (int k = 0; k < mask.pairs(); ++k)
    for (int i = 0; i < arch.widths[k]; ++i)
      for (int j = 0; j < arch.widths[k + 1]; ++j)
        if (mask.at(k, i, j) && !(fwd[k][i] && bwd[k + 1][j]))
          out.push_back({k, i, j});
  return out;
}

ConnectionMask dag_prune(const ConnectionMask& mask, const Architecture& arch) {
  check_shape(mask, arch);
  ConnectionMask pruned = mask;
  // One sweep reaches the fixed point; loop anyway and let the second pass
  // confirm it.
  for (;;) {
    const auto redundant = find_redundant(pruned, arch);
    if (redundant.empty()) break;
    for (const Connection& c : redundant)
      pruned.set(c.layer, c.origin, c.terminus, false);
  }
  return pruned;
}

std::vector<Connection> dag_prune_network(MaskedNetwork& net) {
  const ConnectionMask pruned = dag_prune(net.mask, net.arch);
  std::vector<Connection> removed;
  for (const Connection& c : net.mask.enabled_connections())
    if (!pruned.at(c.layer, c.origin, c.terminus)) removed.push_back(c);
  net.mask = pruned;
  net.zero_disabled_weights();
  return removed;
}

}  // namespace synthnet
