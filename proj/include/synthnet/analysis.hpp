#pragma once

#include <string>
#include <vector>

#include "synthnet/matrix.hpp"
#include "synthnet/network.hpp"

namespace synthnet {

// Jaccard index over enabled-connection sets; 1 when both are empty.
double mask_similarity(const ConnectionMask& a, const ConnectionMask& b);

struct SimilarityMatrix {
  std::vector<std::string> labels;
  Matrix values;  // symmetric, unit diagonal
};

SimilarityMatrix similarity_matrix(const std::vector<ConnectionMask>& masks,
                                   const std::vector<std::string>& labels);

// Enabled connections on no complete enabled input->output path: origin not
// reachable from the input layer, or output not reachable from the terminus.
// Two reachability sweeps, not leaf recursion; the fixed point is the same.
std::vector<Connection> find_redundant(const ConnectionMask& mask,
                                       const Architecture& arch);

// Disables redundant connections until none remain. Every surviving enabled
// connection lies on a complete input->output path.
ConnectionMask dag_prune(const ConnectionMask& mask, const Architecture& arch);

// dag_prune applied in place, zeroing the weights of removed connections.
// Returns the removed connections.
std::vector<Connection> dag_prune_network(MaskedNetwork& net);

}  // namespace synthnet
