#pragma once

#include <vector>

#include "gm/graph.hpp"

namespace gm {

// Adjusted Rand index between two labelings of the same nodes, computed from
// the contingency table. Degenerate agreement (both labelings all-singleton
// or both single-cluster) returns 1.0. Throws Error(LengthMismatch).
double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

// Newman modularity of a labeling: Q = sum_c (e_c/m - (d_c/2m)^2).
// Throws Error(NoEdges) / Error(LengthMismatch).
double modularity(const Graph& g, const std::vector<int>& labels);

}  // namespace gm
