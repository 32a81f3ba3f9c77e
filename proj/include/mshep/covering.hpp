#pragma once

// Covering of the node set by tau-point unisolvent subsets: tau + q nearest
// neighbors per anchor, thinned to tau points by greedy Leja selection on a
// row-pivoted Vandermonde elimination.

#include "mshep/nodes.hpp"
#include "mshep/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace mshep {

// greedy pivot threshold, relative to the first pivot
inline constexpr Real kLejaPivotTol = 1e-10;
// subsets whose Vandermonde condition estimate exceeds this are rejected
inline constexpr Real kSubsetCondLimit = 1e8;
// q-escalation on rejection: +10 per retry, capped here
inline constexpr int kMaxSurplus = 50;

struct Covering {
    int p = 0;
    int tau = 0;
    Eigen::MatrixXi subsets;                // m x tau, row j in selection order, anchor first
    std::vector<std::vector<int>> reverse;  // J_i = { j : i in t_j }, ascending
    int max_q_used = 0;                     // largest surplus any anchor needed
};

std::vector<int> nearest_neighbors(const NodeSet& nodes, int anchor, int k);

std::vector<int> leja_select(const NodeSet& nodes, const std::vector<int>& candidates,
                             int anchor, int p);

Covering build_covering(const NodeSet& nodes, int p, int q);

// 1-norm condition estimate of the subset's shifted-scaled Vandermonde
Real subset_vandermonde_condition(const NodeSet& nodes, const std::vector<int>& subset, int p);

} // namespace mshep
