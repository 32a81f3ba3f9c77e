#include "mshep/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mshep {

namespace {

Real multiquadric(Real r2, Real c) { return std::sqrt(r2 + c * c); }

DerivativeBundle mq_bundle(const Vec2& x, const Vec2& center, Real c) {
    const Vec2 d = x - center;
    const Real phi = multiquadric(d.squaredNorm(), c);
    const Real ip = 1.0 / phi, ip3 = ip * ip * ip;
    DerivativeBundle b;
    b.value = phi;
    b.grad = d * ip;
    b.hxx = ip - d[0] * d[0] * ip3;
    b.hxy = -d[0] * d[1] * ip3;
    b.hyy = ip - d[1] * d[1] * ip3;
    return b;
}

} // namespace

Real rbf_auto_shape(const NodeSet& nodes) {
    const int n = nodes.size();
    Real acc = 0;
    for (int i = 0; i < n; ++i) {
        Real best = std::numeric_limits<Real>::infinity();
        for (int k = 0; k < n; ++k)
            if (k != i) best = std::min(best, (nodes.point(i) - nodes.point(k)).norm());
        acc += best;
    }
    return 2.0 * acc / n;
}

RbfModel::RbfModel(const NodeSet& nodes, Real shape) {
    centers_ = nodes.all_points();
    shape_ = shape > 0 ? shape : rbf_auto_shape(nodes);
    const int n = this->n();

    system_ = MatX::Zero(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k)
            system_(i, k) = multiquadric(
                (centers_.row(i) - centers_.row(k)).squaredNorm(), shape_);
        system_(i, n) = 1.0;
        system_(n, i) = 1.0;
    }

    lu_.compute(system_);
    const Real rc = lu_.rcond();
    if (!(rc > 1.0 / kRbfCondLimit))
        throw SolverError("rbf-baseline", "RBF system ill-conditioned");
}

MatX RbfModel::evaluation_rows(const std::vector<Vec2>& pts) const {
    const int n = this->n();
    MatX P(static_cast<int>(pts.size()), n + 1);
    for (int k = 0; k < P.rows(); ++k) {
        const Vec2& x = pts[static_cast<size_t>(k)];
        for (int i = 0; i < n; ++i)
            P(k, i) = multiquadric((x - centers_.row(i).transpose()).squaredNorm(), shape_);
        P(k, n) = 1.0;
    }
    // system is symmetric, so solving on the transpose gives P * M^{-1}
    return lu_.solve(P.transpose()).transpose().leftCols(n);
}

SpatialSystem RbfModel::spatial_system(const NodeSet& nodes, const MarketParams& mp) const {
    mp.validate();
    const int n = this->n();
    const int n_i = nodes.n_interior();
    const int origin = nodes.origin_index();

    MatX E(n_i, n + 1);
    for (int k = 0; k < n_i; ++k) {
        const Vec2 xk = nodes.point(k);
        for (int i = 0; i < n; ++i)
            E(k, i) = spatial_operator(mq_bundle(xk, centers_.row(i).transpose(), shape_), xk, mp);
        E(k, n) = -mp.rate;  // L applied to the appended constant
    }
    const MatX D = lu_.solve(E.transpose()).transpose();

    SpatialSystem sys;
    sys.n_interior = n_i;
    sys.A = D.leftCols(n_i);
    sys.boundary = D.middleCols(origin + 1, nodes.n_far_field());
    sys.origin_column = D.col(origin);
    sys.far_field_pts = nodes.far_field_points();
    return sys;
}

NodeSet rbf_nodeset_fig1() {
    constexpr int kInterior = 370;
    constexpr int kFarField = 20;
    constexpr Real kSMin = 0.2, kSMax = 7.6;

    // diagonal coordinate s = x + y drawn from the density p(s) ~ s * g(s)
    // with g peaked at the kink s = 2; the s factor converts the (s, w)
    // parametrization's 1/s area element into an area density ~ g(s)
    auto g = [](Real s) { return 1.0 / (0.3 + std::abs(s - 2.0)); };
    constexpr int kTable = 4000;
    std::vector<Real> cdf(kTable + 1, 0.0);
    const Real ds = (kSMax - kSMin) / kTable;
    for (int k = 1; k <= kTable; ++k) {
        const Real s0 = kSMin + (k - 1) * ds, s1 = kSMin + k * ds;
        cdf[static_cast<size_t>(k)] =
            cdf[static_cast<size_t>(k - 1)] + 0.5 * ds * (s0 * g(s0) + s1 * g(s1));
    }
    const Real total = cdf.back();
    auto inverse_cdf = [&](Real u) {
        const Real target = u * total;
        auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        if (it == cdf.begin()) return kSMin;
        const size_t k = static_cast<size_t>(it - cdf.begin());
        const Real c0 = cdf[k - 1], c1 = cdf[k];
        const Real frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
        return kSMin + (static_cast<Real>(k - 1) + frac) * ds;
    };

    std::vector<Vec2> pts;
    pts.reserve(kInterior);
    for (const Vec2& uv : halton_unit_square(kInterior)) {
        const Real s = inverse_cdf(uv[0]);
        const Real w = uv[1];
        pts.emplace_back(s * (1.0 - w), s * w);
    }

    std::vector<Vec2> far;
    for (int i = 0; i < kFarField; ++i) {
        const Real y = kDomainSide * static_cast<Real>(i) / (kFarField - 1);
        far.emplace_back(kDomainSide - y, y);
    }
    return partition_nodes(std::move(pts), std::move(far), "rbf-fig1");
}

} // namespace mshep
