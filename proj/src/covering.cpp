#include "mshep/covering.hpp"

#include "mshep/local_poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mshep {

std::vector<int> nearest_neighbors(const NodeSet& nodes, int anchor, int k) {
    const int n = nodes.size();
    if (k > n) throw SolverError("covering", "insufficient nodes");
    const Vec2 a = nodes.point(anchor);

    std::vector<std::pair<Real, int>> dist(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) dist[static_cast<size_t>(i)] = {(nodes.point(i) - a).squaredNorm(), i};
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    std::sort(dist.begin(), dist.begin() + k);  // (distance, index) pairs: ties fall to smaller index

    std::vector<int> out(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<size_t>(i)] = dist[static_cast<size_t>(i)].second;
    return out;
}

std::vector<int> leja_select(const NodeSet& nodes, const std::vector<int>& candidates,
                             int anchor, int p) {
    const MonomialBasis<Real> basis(p);
    const int tau = basis.size();
    const int nc = static_cast<int>(candidates.size());
    if (nc < tau)
        throw SolverError("covering",
                          "degenerate neighborhood at node " + std::to_string(anchor) +
                              ": fewer candidates than basis dimension");

    int anchor_row = -1;
    for (int r = 0; r < nc; ++r)
        if (candidates[static_cast<size_t>(r)] == anchor) { anchor_row = r; break; }
    if (anchor_row < 0) throw SolverError("covering", "candidates must contain the anchor");

    const Vec2 c = nodes.point(anchor);
    Real rho = 0.0;
    for (int i : candidates) rho = std::max(rho, (nodes.point(i) - c).norm());
    if (!(rho > 0.0))
        throw SolverError("covering",
                          "degenerate neighborhood at node " + std::to_string(anchor));

    MatX V(nc, tau);
    for (int r = 0; r < nc; ++r)
        V.row(r) = basis.row((nodes.point(candidates[static_cast<size_t>(r)]) - c) / rho);

    std::vector<bool> taken(static_cast<size_t>(nc), false);
    std::vector<int> selected;
    selected.reserve(static_cast<size_t>(tau));
    Real first_pivot = 0.0;

    for (int s = 0; s < tau; ++s) {
        int pick = -1;
        if (s == 0) {
            pick = anchor_row;
        } else {
            Real best = -1.0;
            for (int r = 0; r < nc; ++r)
                if (!taken[static_cast<size_t>(r)] && std::abs(V(r, s)) > best) {
                    best = std::abs(V(r, s));
                    pick = r;
                }
        }
        const Real pivot = V(pick, s);
        if (s == 0) first_pivot = std::abs(pivot);
        if (!(std::abs(pivot) > kLejaPivotTol * first_pivot))
            throw SolverError("covering",
                              "degenerate neighborhood at node " + std::to_string(anchor));
        taken[static_cast<size_t>(pick)] = true;
        selected.push_back(candidates[static_cast<size_t>(pick)]);
        for (int r = 0; r < nc; ++r)
            if (!taken[static_cast<size_t>(r)])
                V.row(r) -= (V(r, s) / pivot) * V.row(pick);
    }
    return selected;
}

Real subset_vandermonde_condition(const NodeSet& nodes, const std::vector<int>& subset, int p) {
    const MonomialBasis<Real> basis(p);
    const int tau = basis.size();
    const Vec2 c = nodes.point(subset[0]);
    Real rho = 0.0;
    for (int i : subset) rho = std::max(rho, (nodes.point(i) - c).norm());
    if (!(rho > 0.0)) return std::numeric_limits<Real>::infinity();

    MatX V(tau, tau);
    for (int k = 0; k < tau; ++k)
        V.row(k) = basis.row((nodes.point(subset[static_cast<size_t>(k)]) - c) / rho);
    Eigen::PartialPivLU<MatX> lu(V);
    const Real rc = lu.rcond();
    if (!(rc > 0.0)) return std::numeric_limits<Real>::infinity();
    return 1.0 / rc;
}

Covering build_covering(const NodeSet& nodes, int p, int q) {
    const MonomialBasis<Real> basis(p);
    const int tau = basis.size();
    const int n = nodes.size();
    if (q < 0) throw SolverError("covering", "negative surplus");
    if (n < tau + q) throw SolverError("covering", "insufficient nodes");

    Covering cov;
    cov.p = p;
    cov.tau = tau;
    cov.subsets.resize(n, tau);
    cov.reverse.assign(static_cast<size_t>(n), {});
    cov.max_q_used = q;

    for (int i = 0; i < n; ++i) {
        int qe = q;
        for (;;) {
            const int k = std::min(n, tau + qe);
            try {
                auto sel = leja_select(nodes, nearest_neighbors(nodes, i, k), i, p);
                if (subset_vandermonde_condition(nodes, sel, p) >= kSubsetCondLimit)
                    throw SolverError("covering", "degenerate neighborhood at node " +
                                                      std::to_string(i) +
                                                      ": ill-conditioned subset");
                for (int s = 0; s < tau; ++s) cov.subsets(i, s) = sel[static_cast<size_t>(s)];
                break;
            } catch (const SolverError&) {
                if (qe >= kMaxSurplus || k >= n) throw;
                qe = std::min(qe + 10, kMaxSurplus);
            }
        }
        cov.max_q_used = std::max(cov.max_q_used, qe);
    }

    for (int j = 0; j < n; ++j)
        for (int s = 0; s < tau; ++s) cov.reverse[static_cast<size_t>(cov.subsets(j, s))].push_back(j);
    for (auto& J : cov.reverse) std::sort(J.begin(), J.end());
    return cov;
}

} // namespace mshep
