#include "mshep/fd_reference.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mshep {

namespace {

// stencil coefficients of L at grid point (x, y):
//   first derivatives: central, coefficient r*x/(2h) and r*y/(2h)
//   second derivatives: sigma^2 x^2 / (2 h^2) etc., cross term 4-point
struct StencilScales {
    Real cx, cy, dxx, dyy, dxy, react;
};

StencilScales scales_at(const MarketParams& mp, Real x, Real y, Real h) {
    return {mp.rate * x / (2 * h),
            mp.rate * y / (2 * h),
            0.5 * mp.sigma1 * mp.sigma1 * x * x / (h * h),
            0.5 * mp.sigma2 * mp.sigma2 * y * y / (h * h),
            mp.correlation * mp.sigma1 * mp.sigma2 * x * y / (4 * h * h),
            -mp.rate};
}

} // namespace

std::vector<Vec2> fd_edge_points(int grid_n) {
    const Real h = kDomainSide / grid_n;
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>(2 * grid_n + 1));
    for (int j = 0; j < grid_n; ++j) pts.emplace_back(kDomainSide, j * h);
    for (int i = 0; i < grid_n; ++i) pts.emplace_back(i * h, kDomainSide);
    pts.emplace_back(kDomainSide, kDomainSide);
    return pts;
}

FDOperator build_fd_operator(const MarketParams& mp, int grid_n) {
    if (grid_n < 8) throw SolverError("fd-reference", "grid too coarse");
    mp.validate();
    const int N = grid_n;
    const Real h = kDomainSide / N;

    FDOperator op;
    op.grid_n = N;
    std::vector<Eigen::Triplet<Real>> ti, te;
    ti.reserve(static_cast<size_t>(9) * N * N);

    // edge column layout: x=8 edge j=0..N-1, y=8 edge i=0..N-1, corner (8,8)
    auto edge_col = [N](int i, int j) {
        if (i == N && j == N) return 2 * N;
        if (i == N) return j;
        return N + i;
    };
    auto scatter = [&](int row, int i, int j, Real v) {
        if (v == 0.0) return;
        if (i == N || j == N) te.emplace_back(row, edge_col(i, j), v);
        else ti.emplace_back(row, j * N + i, v);
    };

    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            const int row = j * N + i;
            const StencilScales s = scales_at(mp, i * h, j * h, h);
            Real diag = s.react - 2 * s.dxx - 2 * s.dyy;
            // on the axes every x- (resp. y-) derivative coefficient is zero,
            // so the stencil never reaches i-1 or j-1 out of range
            scatter(row, i + 1, j, s.cx + s.dxx);
            if (i > 0) scatter(row, i - 1, j, -s.cx + s.dxx);
            scatter(row, i, j + 1, s.cy + s.dyy);
            if (j > 0) scatter(row, i, j - 1, -s.cy + s.dyy);
            scatter(row, i + 1, j + 1, s.dxy);
            if (i > 0 && j > 0) scatter(row, i - 1, j - 1, s.dxy);
            if (j > 0) scatter(row, i + 1, j - 1, -s.dxy);
            if (i > 0) scatter(row, i - 1, j + 1, -s.dxy);
            ti.emplace_back(row, row, diag);
        }

    op.interior.resize(N * N, N * N);
    op.interior.setFromTriplets(ti.begin(), ti.end());
    op.edge.resize(N * N, 2 * N + 1);
    op.edge.setFromTriplets(te.begin(), te.end());
    return op;
}

FDReference fd_solve(const MarketParams& mp, int grid_n, int steps, int store_every) {
    if (steps < 2) throw SolverError("fd-reference", "too few time steps");
    if (store_every < 1) throw SolverError("fd-reference", "bad storage stride");
    const int N = grid_n;
    const FDOperator op = build_fd_operator(mp, N);
    const Real h = kDomainSide / N;
    const Real T = mp.maturity;
    const Real dt = T / steps;
    const auto edge_pts = fd_edge_points(N);

    auto edge_values = [&](Real t) {
        VecX v(2 * N + 1);
        for (int k = 0; k < v.size(); ++k) v[k] = far_field_value(edge_pts[static_cast<size_t>(k)], t, mp);
        return v;
    };

    VecX u(N * N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) u[j * N + i] = payoff(Vec2(i * h, j * h), mp);
    const Real growth_limit = 1e6 * (u.lpNorm<Eigen::Infinity>() + 1.0);

    const Eigen::SparseMatrix<Real> identity = [&] {
        Eigen::SparseMatrix<Real> I(N * N, N * N);
        I.setIdentity();
        return I;
    }();

    FDReference ref;
    ref.grid_n = N;
    ref.dt = dt;
    ref.steps = steps;

    auto store = [&](int step, const VecX& interior_u, Real t) {
        if (step % store_every != 0 && step != steps) return;
        VecX full((N + 1) * (N + 1));
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) full[j * (N + 1) + i] = interior_u[j * N + i];
        for (int j = 0; j <= N; ++j) full[j * (N + 1) + N] = far_field_value(Vec2(kDomainSide, j * h), t, mp);
        for (int i = 0; i <= N; ++i) full[N * (N + 1) + i] = far_field_value(Vec2(i * h, kDomainSide), t, mp);
        ref.times.push_back(t);
        ref.slices.push_back(std::move(full));
    };

    store(0, u, 0.0);

    Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu1;
    lu1.compute(identity - dt * op.interior);
    if (lu1.info() != Eigen::Success) throw SolverError("fd-reference", "reference factorization failed");
    VecX prev = u;
    u = lu1.solve(prev + dt * (op.edge * edge_values(dt)));
    store(1, u, dt);

    Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu2;
    lu2.compute(identity - (2.0 / 3.0) * dt * op.interior);
    if (lu2.info() != Eigen::Success) throw SolverError("fd-reference", "reference factorization failed");

    for (int l = 2; l <= steps; ++l) {
        const Real t = l == steps ? T : l * dt;
        VecX next = lu2.solve(4.0 / 3.0 * u - 1.0 / 3.0 * prev +
                              (2.0 / 3.0) * dt * (op.edge * edge_values(t)));
        prev = std::move(u);
        u = std::move(next);
        if (!(u.lpNorm<Eigen::Infinity>() <= growth_limit))
            throw SolverError("fd-reference", "reference diverged");
        store(l, u, t);
    }
    return ref;
}

Real fd_interpolate(const FDReference& ref, const Vec2& x, Real t) {
    int slice = -1;
    for (size_t s = 0; s < ref.times.size(); ++s)
        if (std::abs(ref.times[s] - t) <= 1e-12) { slice = static_cast<int>(s); break; }
    if (slice < 0) throw SolverError("fd-reference", "time level not stored");

    const int N = ref.grid_n;
    const Real h = ref.h();
    const Real fx = std::clamp(x[0] / h, 0.0, static_cast<Real>(N));
    const Real fy = std::clamp(x[1] / h, 0.0, static_cast<Real>(N));
    const int i = std::min(static_cast<int>(fx), N - 1);
    const int j = std::min(static_cast<int>(fy), N - 1);
    const Real a = fx - i, b = fy - j;
    const VecX& v = ref.slices[static_cast<size_t>(slice)];
    auto at = [&](int ii, int jj) { return v[jj * (N + 1) + ii]; };
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) +
           (1 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1);
}

} // namespace mshep
