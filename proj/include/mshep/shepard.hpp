#pragma once

// Multinode Shepard blend functions B_{mu,j} and the cardinal basis
// W_{mu,i} = sum_{j in J_i} B_{mu,j} lambda_{j,i}, with analytic first and
// second derivatives, evaluable anywhere including exactly at nodes.
//
// The weights alpha_j = prod_l ||x - x_{j_l}||^{-mu} are handled in log form:
// g_j = -(mu/2) sum_l log ||x - x_{j_l}||^2, alpha_j = exp(g_j - max_k g_k).
// Within near_node_tol of a node the evaluation point snaps to that node and
// every alpha is multiplied by ||x - x_q||^mu, which cancels the singular
// factor for the subsets containing q and sends every other subset's value,
// gradient, and Hessian to exactly zero (mu > 2).

#include "mshep/covering.hpp"
#include "mshep/local_poly.hpp"
#include "mshep/nodes.hpp"
#include "mshep/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <vector>

namespace mshep {

template <typename Scalar = Real>
struct ShepardParams {
    Scalar mu = Scalar(4);
    // 0 resolves to 1e-8 x bounding-box diameter at construction
    Scalar near_node_tol = Scalar(0);
};

template <typename Scalar = Real>
struct ShepardRowEntry {
    int node = -1;
    Scalar value = Scalar(0);
    Vector2<Scalar> grad = Vector2<Scalar>::Zero();
    Scalar hxx = Scalar(0), hxy = Scalar(0), hyy = Scalar(0);
};

template <typename Scalar = Real>
struct ShepardRow {
    Vector2<Scalar> point;        // snapped point actually evaluated
    int snapped_node = -1;        // node index when the regularized path ran
    std::vector<ShepardRowEntry<Scalar>> entries;  // ascending node index
};

// B_{mu,j} and derivatives for every subset; inactive subsets hold exact zeros.
template <typename Scalar = Real>
struct BlendEvaluation {
    Eigen::VectorX<Scalar> value;
    Eigen::Matrix<Scalar, 2, Eigen::Dynamic> grad;
    Eigen::Matrix<Scalar, 3, Eigen::Dynamic> hess;  // xx, xy, yy
    std::vector<int> active;
    int snapped_node = -1;
};

template <typename Scalar = Real>
class ShepardBasis {
public:
    ShepardBasis(const NodeSet& nodes, const Covering& covering, ShepardParams<Scalar> params)
        : covering_(covering), params_(params) {
        const Scalar mu = params_.mu;
        if (!(mu > Scalar(2)) || mu != std::floor(mu) || static_cast<long>(mu) % 2 != 0)
            throw SolverError("shepard-basis", "mu must be an even integer greater than 2");

        const int n = nodes.size();
        pts_.resize(n, 2);
        for (int i = 0; i < n; ++i) pts_.row(i) = nodes.point(i).template cast<Scalar>().transpose();

        if (params_.near_node_tol <= Scalar(0)) {
            const Vector2<Scalar> lo = pts_.colwise().minCoeff().transpose();
            const Vector2<Scalar> hi = pts_.colwise().maxCoeff().transpose();
            params_.near_node_tol = Scalar(1e-8) * (hi - lo).norm();
        }

        locals_.reserve(static_cast<size_t>(covering_.subsets.rows()));
        std::vector<int> subset(static_cast<size_t>(covering_.tau));
        for (int j = 0; j < covering_.subsets.rows(); ++j) {
            for (int s = 0; s < covering_.tau; ++s) subset[static_cast<size_t>(s)] = covering_.subsets(j, s);
            locals_.emplace_back(build_local_interpolant<Scalar>(nodes, subset, covering_.p));
        }
    }

    int n() const { return static_cast<int>(pts_.rows()); }
    int m() const { return static_cast<int>(covering_.subsets.rows()); }
    const Covering& covering() const { return covering_; }
    const ShepardParams<Scalar>& params() const { return params_; }
    const LocalInterpolant<Scalar>& local(int j) const { return locals_[static_cast<size_t>(j)]; }

    BlendEvaluation<Scalar> blend(const Vector2<Scalar>& x) const {
        Weights w = weights(x, true);
        BlendEvaluation<Scalar> out;
        out.value = Eigen::VectorX<Scalar>::Zero(m());
        out.grad = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>::Zero(2, m());
        out.hess = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>::Zero(3, m());
        out.active = w.active;
        out.snapped_node = w.snapped;
        for (size_t a = 0; a < w.active.size(); ++a) {
            const int j = w.active[a];
            const Scalar B = w.alpha[a] / w.S;
            const Vector2<Scalar> d = w.grad_g.col(a) - w.wS;
            out.value[j] = B;
            out.grad.col(j) = B * d;
            out.hess(0, j) = B * (d[0] * d[0] + w.hess_g(0, a) + w.wS[0] * w.wS[0] - w.HS(0));
            out.hess(1, j) = B * (d[0] * d[1] + w.hess_g(1, a) + w.wS[0] * w.wS[1] - w.HS(1));
            out.hess(2, j) = B * (d[1] * d[1] + w.hess_g(2, a) + w.wS[1] * w.wS[1] - w.HS(2));
        }
        return out;
    }

    ShepardRow<Scalar> row(const Vector2<Scalar>& x) const { return assemble_row(x, true); }
    ShepardRow<Scalar> row_values(const Vector2<Scalar>& x) const { return assemble_row(x, false); }

    Scalar interpolate(const Vector2<Scalar>& x, const Eigen::VectorX<Scalar>& nodal) const {
        ShepardRow<Scalar> r = row_values(x);
        Scalar s = Scalar(0);
        for (const auto& e : r.entries) s += e.value * nodal[e.node];
        return s;
    }

private:
    // per-evaluation weight state over the active subsets
    struct Weights {
        Vector2<Scalar> x;                   // evaluation point after any snap
        int snapped = -1;
        std::vector<int> active;
        std::vector<Scalar> alpha;           // exp(g_j - g_max)
        Scalar S = Scalar(0);                // sum of alpha
        Eigen::Matrix<Scalar, 2, Eigen::Dynamic> grad_g;
        Eigen::Matrix<Scalar, 3, Eigen::Dynamic> hess_g;
        Vector2<Scalar> wS = Vector2<Scalar>::Zero();   // grad S / S
        Eigen::Matrix<Scalar, 3, 1> HS = Eigen::Matrix<Scalar, 3, 1>::Zero();  // Hess S / S
    };

    // weights worth keeping relative to the dominant one; anything smaller
    // cannot move a row entry past the sparsity threshold
    static constexpr Scalar kWeightFloor = Scalar(1e-250);

    Weights weights(const Vector2<Scalar>& x_in, bool derivatives) const {
        const int nn = n(), mm = m();
        const int tau = covering_.tau;

        Weights w;
        w.x = x_in;
        Eigen::VectorX<Scalar> d2(nn);
        for (int i = 0; i < nn; ++i) d2[i] = (pts_.row(i).transpose() - w.x).squaredNorm();
        int nearest = 0;
        const Scalar dmin = d2.minCoeff(&nearest);
        if (std::sqrt(dmin) < params_.near_node_tol) {
            w.snapped = nearest;
            w.x = pts_.row(nearest).transpose();
            for (int i = 0; i < nn; ++i) d2[i] = (pts_.row(i).transpose() - w.x).squaredNorm();
        }

        // candidate subsets: all of them on the smooth path, J_q after a snap
        const std::vector<int>* restrict = w.snapped >= 0
            ? &covering_.reverse[static_cast<size_t>(w.snapped)] : nullptr;
        const int nc = restrict ? static_cast<int>(restrict->size()) : mm;

        Eigen::VectorX<Scalar> logd2(nn);
        if (!restrict) {
            for (int i = 0; i < nn; ++i) logd2[i] = std::log(d2[i]);
        } else {
            // only distances to members of the active subsets are consulted
            logd2.setZero();
            for (int j : *restrict)
                for (int s = 0; s < tau; ++s) {
                    const int i = covering_.subsets(j, s);
                    if (i != w.snapped) logd2[i] = std::log(d2[i]);
                }
        }

        const Scalar half_mu = params_.mu / Scalar(2);
        Eigen::VectorX<Scalar> g(nc);
        for (int a = 0; a < nc; ++a) {
            const int j = restrict ? (*restrict)[static_cast<size_t>(a)] : a;
            Scalar acc = Scalar(0);
            for (int s = 0; s < tau; ++s) {
                const int i = covering_.subsets(j, s);
                if (i != w.snapped) acc += logd2[i];
            }
            g[a] = -half_mu * acc;
        }
        const Scalar gmax = g.maxCoeff();

        w.active.reserve(static_cast<size_t>(nc));
        w.alpha.reserve(static_cast<size_t>(nc));
        for (int a = 0; a < nc; ++a) {
            const Scalar e = g[a] - gmax;
            if (e < Scalar(-600)) continue;
            const Scalar alpha = std::exp(e);
            if (alpha < kWeightFloor) continue;
            w.active.push_back(restrict ? (*restrict)[static_cast<size_t>(a)] : a);
            w.alpha.push_back(alpha);
            w.S += alpha;
        }

        if (!derivatives) return w;

        const int na = static_cast<int>(w.active.size());
        w.grad_g.setZero(2, na);
        w.hess_g.setZero(3, na);
        Vector2<Scalar> gradS = Vector2<Scalar>::Zero();
        Eigen::Matrix<Scalar, 3, 1> hessS = Eigen::Matrix<Scalar, 3, 1>::Zero();
        const Scalar mu = params_.mu;
        for (int a = 0; a < na; ++a) {
            const int j = w.active[static_cast<size_t>(a)];
            Vector2<Scalar> gg = Vector2<Scalar>::Zero();
            Eigen::Matrix<Scalar, 3, 1> hg = Eigen::Matrix<Scalar, 3, 1>::Zero();
            for (int s = 0; s < tau; ++s) {
                const int i = covering_.subsets(j, s);
                if (i == w.snapped) continue;
                const Vector2<Scalar> d = w.x - pts_.row(i).transpose();
                const Scalar ir2 = Scalar(1) / d2[i];
                gg -= mu * ir2 * d;
                const Scalar ir4_2 = Scalar(2) * ir2 * ir2;
                hg[0] -= mu * (ir2 - ir4_2 * d[0] * d[0]);
                hg[1] -= mu * (-ir4_2 * d[0] * d[1]);
                hg[2] -= mu * (ir2 - ir4_2 * d[1] * d[1]);
            }
            w.grad_g.col(a) = gg;
            w.hess_g.col(a) = hg;
            const Scalar alpha = w.alpha[static_cast<size_t>(a)];
            gradS += alpha * gg;
            hessS[0] += alpha * (gg[0] * gg[0] + hg[0]);
            hessS[1] += alpha * (gg[0] * gg[1] + hg[1]);
            hessS[2] += alpha * (gg[1] * gg[1] + hg[2]);
        }
        w.wS = gradS / w.S;
        w.HS = hessS / w.S;
        return w;
    }

    ShepardRow<Scalar> assemble_row(const Vector2<Scalar>& x_in, bool derivatives) const {
        Weights w = weights(x_in, derivatives);
        ShepardRow<Scalar> out;
        out.point = w.x;
        out.snapped_node = w.snapped;

        std::map<int, ShepardRowEntry<Scalar>> acc;
        for (size_t a = 0; a < w.active.size(); ++a) {
            const int j = w.active[a];
            const Scalar B = w.alpha[a] / w.S;
            const auto& loc = locals_[static_cast<size_t>(j)];

            if (!derivatives) {
                const Eigen::VectorX<Scalar> lam = loc.values(w.x);
                for (int s = 0; s < covering_.tau; ++s) {
                    auto& e = acc[covering_.subsets(j, s)];
                    e.value += B * lam[s];
                }
                continue;
            }

            const Vector2<Scalar> dB = B * (w.grad_g.col(a) - w.wS);
            const Vector2<Scalar> d = w.grad_g.col(a) - w.wS;
            Eigen::Matrix<Scalar, 3, 1> hB;
            hB[0] = B * (d[0] * d[0] + w.hess_g(0, a) + w.wS[0] * w.wS[0] - w.HS[0]);
            hB[1] = B * (d[0] * d[1] + w.hess_g(1, a) + w.wS[0] * w.wS[1] - w.HS[1]);
            hB[2] = B * (d[1] * d[1] + w.hess_g(2, a) + w.wS[1] * w.wS[1] - w.HS[2]);

            const auto lam = loc.evaluate(w.x);
            for (int s = 0; s < covering_.tau; ++s) {
                auto& e = acc[covering_.subsets(j, s)];
                const Scalar lv = lam.values[s];
                const Scalar lx = lam.grads(0, s), ly = lam.grads(1, s);
                e.value += B * lv;
                e.grad[0] += dB[0] * lv + B * lx;
                e.grad[1] += dB[1] * lv + B * ly;
                e.hxx += hB[0] * lv + Scalar(2) * dB[0] * lx + B * lam.hessians(0, s);
                e.hxy += hB[1] * lv + dB[0] * ly + dB[1] * lx + B * lam.hessians(1, s);
                e.hyy += hB[2] * lv + Scalar(2) * dB[1] * ly + B * lam.hessians(2, s);
            }
        }

        out.entries.reserve(acc.size());
        for (auto& [i, e] : acc) {
            const Scalar mag = std::max({std::abs(e.value), std::abs(e.grad[0]),
                                         std::abs(e.grad[1]), std::abs(e.hxx),
                                         std::abs(e.hxy), std::abs(e.hyy)});
            if (mag < Scalar(1e-14)) continue;  // sparsity threshold
            e.node = i;
            out.entries.push_back(e);
        }
        return out;
    }

    Points<Scalar> pts_;
    Covering covering_;
    ShepardParams<Scalar> params_;
    std::vector<LocalInterpolant<Scalar>> locals_;
};

} // namespace mshep
