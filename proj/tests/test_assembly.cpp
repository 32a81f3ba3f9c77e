#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <mshep/assembly.hpp>
#include <mshep/covering.hpp>
#include <mshep/nodes.hpp>
#include <mshep/shepard.hpp>

#include <cmath>
#include <vector>

using namespace mshep;

namespace {

struct Fixture {
    NodeSet nodes = halton_nodeset(500, 30);
    Covering cov = build_covering(nodes, 2, 10);
    ShepardBasis<Real> basis{nodes, cov, ShepardParams<Real>{}};
};

struct Quadratic {
    double c0, cx, cy, cxx, cxy, cyy;
    double value(const Vec2& p) const {
        return c0 + cx * p[0] + cy * p[1] + cxx * p[0] * p[0] + cxy * p[0] * p[1] +
               cyy * p[1] * p[1];
    }
    double lvalue(const Vec2& p, const MarketParams& mp) const {
        DerivativeBundle d;
        d.value = value(p);
        d.grad = Vec2(cx + 2 * cxx * p[0] + cxy * p[1], cy + cxy * p[0] + 2 * cyy * p[1]);
        d.hxx = 2 * cxx;
        d.hxy = cxy;
        d.hyy = 2 * cyy;
        return spatial_operator(d, p, mp);
    }
};

} // namespace

TEST_CASE("shapes and column split") {
    Fixture f;
    MarketParams mp;
    SpatialSystem sys = assemble(f.nodes, f.basis, mp);
    CHECK(sys.n_interior == f.nodes.n_interior());
    CHECK(sys.A.rows() == sys.n_interior);
    CHECK(sys.A.cols() == sys.n_interior);
    CHECK(sys.boundary.rows() == sys.n_interior);
    CHECK(sys.boundary.cols() == f.nodes.n_far_field());
    CHECK(sys.origin_column.size() == 0);
    CHECK(sys.far_field_pts.rows() == f.nodes.n_far_field());

    SpatialSystem dbg = assemble(f.nodes, f.basis, mp, true);
    CHECK(dbg.origin_column.size() == sys.n_interior);
    // the debug mode only adds the origin column, the rest is identical
    CHECK((dbg.A - sys.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dbg.boundary - sys.boundary).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quadratic exactness across node roles") {
    Fixture f;
    MarketParams mp;
    SpatialSystem sys = assemble(f.nodes, f.basis, mp, true);

    const std::vector<Quadratic> gs = {
        {0, 1, 0, 0, 0, 0},   // x
        {0, 0, 1, 0, 0, 0},   // y
        {0, 0, 0, 1, 0, 0},   // x^2
        {0, 0, 0, 0, 1, 0},   // xy
        {0, 0, 0, 0, 0, 1},   // y^2
        {2.5, -1, 0.5, 0.25, -0.75, 1.5},
    };
    for (const Quadratic& g : gs) {
        VecX gi(sys.n_interior), gf(f.nodes.n_far_field());
        for (int i = 0; i < sys.n_interior; ++i) gi[i] = g.value(f.nodes.point(i));
        for (int i = 0; i < f.nodes.n_far_field(); ++i)
            gf[i] = g.value(sys.far_field_pts.row(i).transpose());
        const double g_origin = g.value(Vec2(0, 0));

        VecX lhs = sys.A * gi + sys.boundary * gf + sys.origin_column * g_origin;
        double worst = 0;
        for (int k = 0; k < sys.n_interior; ++k)
            worst = std::max(worst, std::abs(lhs[k] - g.lvalue(f.nodes.point(k), mp)));
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("constant field sees only the reaction term") {
    Fixture f;
    MarketParams mp;
    SpatialSystem sys = assemble(f.nodes, f.basis, mp, true);
    // g == 1 everywhere: A*1 + boundary*1 + origin*1 == -r at every row
    VecX lhs = sys.A * VecX::Ones(sys.n_interior) +
               sys.boundary * VecX::Ones(f.nodes.n_far_field()) +
               sys.origin_column;
    for (int k = 0; k < sys.n_interior; ++k)
        CHECK(lhs[k] == doctest::Approx(-mp.rate).epsilon(1e-9));
}

TEST_CASE("assembled entries against a directly computed row") {
    Fixture f;
    MarketParams mp;
    mp.correlation = 0.2; // exercise the cross term with a distinct value
    SpatialSystem sys = assemble(f.nodes, f.basis, mp, true);

    for (int k : {0, 25, sys.n_interior - 1}) {
        const auto row = f.basis.row(f.nodes.point(k));
        VecX a = VecX::Zero(sys.n_interior);
        VecX b = VecX::Zero(f.nodes.n_far_field());
        double origin = 0;
        for (const auto& e : row.entries) {
            DerivativeBundle d;
            d.value = e.value;
            d.grad = e.grad;
            d.hxx = e.hxx;
            d.hxy = e.hxy;
            d.hyy = e.hyy;
            const double v = spatial_operator(d, f.nodes.point(k), mp);
            if (f.nodes.is_interior(e.node)) a[e.node] = v;
            else if (f.nodes.is_origin(e.node)) origin = v;
            else b[e.node - f.nodes.origin_index() - 1] = v;
        }
        CHECK((sys.A.row(k).transpose() - a).cwiseAbs().maxCoeff() == 0.0);
        CHECK((sys.boundary.row(k).transpose() - b).cwiseAbs().maxCoeff() == 0.0);
        CHECK(sys.origin_column[k] == origin);
    }
}

TEST_CASE("row support stays local") {
    Fixture f;
    MarketParams mp;
    SpatialSystem sys = assemble(f.nodes, f.basis, mp);
    // nodes reachable from x_k: members of subsets containing a node whose
    // weight survives; bounded by tau times the largest membership count
    size_t max_J = 0;
    for (const auto& J : f.cov.reverse) max_J = std::max(max_J, J.size());
    // a row can touch at most the union of all active subsets' members; the
    // sparsity threshold keeps the practical support far smaller
    int worst = 0;
    for (int k = 0; k < sys.n_interior; ++k) {
        int nnz = 0;
        for (int c = 0; c < sys.A.cols(); ++c) nnz += sys.A(k, c) != 0.0;
        for (int c = 0; c < sys.boundary.cols(); ++c) nnz += sys.boundary(k, c) != 0.0;
        worst = std::max(worst, nnz);
    }
    CHECK(worst > 0);
    CHECK(worst <= f.nodes.size() / 2); // far below dense rows
}

TEST_CASE("boundary vector holds the far-field data at time t") {
    Fixture f;
    MarketParams mp;
    BoundaryVector bv = boundary_vector(f.nodes, mp, 0.25);
    CHECK(bv.t == 0.25);
    REQUIRE(bv.values.size() == f.nodes.n_far_field());
    for (int i = 0; i < f.nodes.n_far_field(); ++i) {
        const Vec2 p = f.nodes.far_field[static_cast<size_t>(i)];
        CHECK(bv.values[i] ==
              doctest::Approx(0.5 * (p[0] + p[1]) - std::exp(-0.03 * 0.25)).epsilon(1e-15));
    }
    // all far-field nodes sit on x+y=8, so the values coincide
    CHECK(std::abs(bv.values.maxCoeff() - bv.values.minCoeff()) < 1e-12);

    // discounting decreases the value as t grows
    BoundaryVector later = boundary_vector(f.nodes, mp, 0.9);
    CHECK(later.values[0] > bv.values[0]);

    CHECK_THROWS_AS(boundary_vector(f.nodes, mp, -0.1), SolverError);

    // the free-standing helper agrees
    VecX direct = far_field_values(f.nodes.far_field_points(), mp, 0.25);
    CHECK((direct - bv.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembly is deterministic") {
    Fixture f;
    MarketParams mp;
    SpatialSystem a = assemble(f.nodes, f.basis, mp);
    SpatialSystem b = assemble(f.nodes, f.basis, mp);
    CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.boundary - b.boundary).cwiseAbs().maxCoeff() == 0.0);
}
