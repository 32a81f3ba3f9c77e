#include "mshep/timestepper.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mshep {

namespace {

constexpr Real kCondLimit = 1e12;

struct Factored {
    Eigen::PartialPivLU<MatX> lu;
    Real cond = 0;
};

// 2-norm condition estimate: power iteration on M^T M for the largest singular
// value, inverse iteration through the factorization for the smallest.  The
// start vector is fixed, so repeated runs report identical digits.
Real spectral_condition(const MatX& M, const Eigen::PartialPivLU<MatX>& lu) {
    const Eigen::Index n = M.rows();
    VecX start(n);
    for (Eigen::Index i = 0; i < n; ++i) start[i] = 1.0 + 0.5 * std::sin(Real(i));
    start.normalize();
    auto dominant = [&](auto&& apply) {
        VecX v = start;
        Real s = 0;
        for (int it = 0; it < 300; ++it) {
            VecX w = apply(v);
            const Real sn = std::sqrt(w.norm());
            w.normalize();
            v.swap(w);
            if (it >= 3 && std::abs(sn - s) <= 1e-9 * sn) return sn;
            s = sn;
        }
        return s;
    };
    const Real smax = dominant([&](const VecX& v) { return VecX(M.transpose() * (M * v)); });
    const Real sinv = dominant([&](const VecX& v) { return VecX(lu.transpose().solve(lu.solve(v))); });
    return smax * sinv;
}

// factor I - c*dt*A and reject near-singular systems
Factored factor_shifted(const MatX& A, Real c_dt, int* counter) {
    const MatX M = MatX::Identity(A.rows(), A.cols()) - c_dt * A;
    Factored f{Eigen::PartialPivLU<MatX>(M), 0};
    if (counter) ++*counter;
    const Real rc = f.lu.rcond();
    if (!(rc > 1.0 / kCondLimit)) throw SolverError("timestepper", "time-step matrix singular");
    f.cond = spectral_condition(M, f.lu);
    return f;
}

} // namespace

Scheme parse_scheme(const std::string& name) {
    if (name == "bdf1") return Scheme::bdf1;
    if (name == "bdf2") return Scheme::bdf2;
    if (name == "bdf3") return Scheme::bdf3;
    throw SolverError("timestepper", "unknown scheme: " + name);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::bdf1: return "bdf1";
        case Scheme::bdf2: return "bdf2";
        default: return "bdf3";
    }
}

VecX initial_condition(const NodeSet& nodes, const MarketParams& mp) {
    VecX p0(nodes.n_interior());
    for (int i = 0; i < nodes.n_interior(); ++i) p0[i] = payoff(nodes.point(i), mp);
    return p0;
}

VecX step_bdf1(const SpatialSystem& sys, const MarketParams& mp, const VecX& prev,
               Real dt, Real t_next) {
    if (!(dt > 0)) throw SolverError("timestepper", "step size must be positive");
    Factored f = factor_shifted(sys.A, dt, nullptr);
    const VecX b = far_field_values(sys.far_field_pts, mp, t_next);
    return f.lu.solve(prev + dt * (sys.boundary * b));
}

VecX step_bdf2(const SpatialSystem& sys, const MarketParams& mp, const VecX& prev,
               const VecX& prev2, Real dt, Real t_next) {
    if (!(dt > 0)) throw SolverError("timestepper", "step size must be positive");
    Factored f = factor_shifted(sys.A, 2.0 / 3.0 * dt, nullptr);
    const VecX b = far_field_values(sys.far_field_pts, mp, t_next);
    return f.lu.solve(4.0 / 3.0 * prev - 1.0 / 3.0 * prev2 +
                      2.0 / 3.0 * dt * (sys.boundary * b));
}

Trajectory run(const SpatialSystem& sys, const NodeSet& nodes, const MarketParams& mp,
               const RunOptions& opts) {
    mp.validate();
    const int M = opts.steps;
    const int needed = opts.scheme == Scheme::bdf3 ? 3 : (opts.scheme == Scheme::bdf2 ? 2 : 1);
    if (M < needed) throw SolverError("timestepper", "too few steps for the scheme");

    const Real T = mp.maturity;
    const Real dt = T / M;

    Trajectory traj;
    traj.step_sizes.assign(static_cast<size_t>(M), dt);
    traj.times.resize(static_cast<size_t>(M) + 1);
    for (int l = 0; l <= M; ++l) traj.times[static_cast<size_t>(l)] = l == M ? T : l * dt;

    traj.states.reserve(static_cast<size_t>(M) + 1);
    traj.states.push_back(initial_condition(nodes, mp));

    auto rhs_b = [&](int l) {
        const Real t = opts.freeze_boundary ? traj.times[1] : traj.times[static_cast<size_t>(l)];
        return VecX(sys.boundary * far_field_values(sys.far_field_pts, mp, t));
    };

    Factored lu1 = factor_shifted(sys.A, dt, &traj.factorizations);
    traj.cond_first = lu1.cond;
    traj.cond_rest = lu1.cond;
    traj.states.push_back(lu1.lu.solve(traj.states[0] + dt * rhs_b(1)));

    if (opts.scheme == Scheme::bdf1) {
        for (int l = 2; l <= M; ++l)
            traj.states.push_back(lu1.lu.solve(traj.states[static_cast<size_t>(l - 1)] + dt * rhs_b(l)));
        return traj;
    }

    Factored lu2 = factor_shifted(sys.A, 2.0 / 3.0 * dt, &traj.factorizations);
    traj.cond_rest = lu2.cond;
    const int last_bdf2 = opts.scheme == Scheme::bdf3 ? std::min(2, M) : M;
    for (int l = 2; l <= last_bdf2; ++l)
        traj.states.push_back(lu2.lu.solve(4.0 / 3.0 * traj.states[static_cast<size_t>(l - 1)] -
                                           1.0 / 3.0 * traj.states[static_cast<size_t>(l - 2)] +
                                           2.0 / 3.0 * dt * rhs_b(l)));

    if (opts.scheme == Scheme::bdf3 && M >= 3) {
        // (11/6) P^n - 3 P^{n-1} + (3/2) P^{n-2} - (1/3) P^{n-3} = dt (A P^n + B b)
        Factored lu3 = factor_shifted(sys.A, 6.0 / 11.0 * dt, &traj.factorizations);
        traj.cond_rest = lu3.cond;
        for (int l = 3; l <= M; ++l)
            traj.states.push_back(lu3.lu.solve(18.0 / 11.0 * traj.states[static_cast<size_t>(l - 1)] -
                                               9.0 / 11.0 * traj.states[static_cast<size_t>(l - 2)] +
                                               2.0 / 11.0 * traj.states[static_cast<size_t>(l - 3)] +
                                               6.0 / 11.0 * dt * rhs_b(l)));
    }

    for (const VecX& s : traj.states)
        if (!s.allFinite()) throw SolverError("timestepper", "non-finite state");
    return traj;
}

} // namespace mshep
