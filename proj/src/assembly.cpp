#include "mshep/assembly.hpp"

namespace mshep {

VecX far_field_values(const Points<Real>& pts, const MarketParams& mp, Real t) {
    VecX v(pts.rows());
    for (int i = 0; i < pts.rows(); ++i) v[i] = far_field_value(pts.row(i).transpose(), t, mp);
    return v;
}

BoundaryVector boundary_vector(const NodeSet& nodes, const MarketParams& mp, Real t) {
    if (t < 0) throw SolverError("assembly", "negative time");
    return {t, far_field_values(nodes.far_field_points(), mp, t)};
}

SpatialSystem assemble(const NodeSet& nodes, const ShepardBasis<Real>& basis,
                       const MarketParams& mp, bool keep_origin_column) {
    mp.validate();
    const int n_i = nodes.n_interior();
    const int n_ff = nodes.n_far_field();
    const int origin = nodes.origin_index();

    SpatialSystem sys;
    sys.n_interior = n_i;
    sys.A = MatX::Zero(n_i, n_i);
    sys.boundary = MatX::Zero(n_i, n_ff);
    sys.far_field_pts = nodes.far_field_points();
    if (keep_origin_column) sys.origin_column = VecX::Zero(n_i);

    for (int k = 0; k < n_i; ++k) {
        const Vec2 xk = nodes.point(k);
        const ShepardRow<Real> row = basis.row(xk);
        for (const auto& e : row.entries) {
            DerivativeBundle d{e.value, e.grad, e.hxx, e.hxy, e.hyy};
            const Real c = spatial_operator(d, xk, mp);
            if (nodes.is_interior(e.node)) sys.A(k, e.node) = c;
            else if (e.node == origin) { if (keep_origin_column) sys.origin_column[k] = c; }
            else sys.boundary(k, e.node - origin - 1) = c;
        }
    }
    return sys;
}

} // namespace mshep
