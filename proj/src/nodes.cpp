#include "mshep/nodes.hpp"

#include <algorithm>
#include <cmath>

namespace mshep {

Vec2 NodeSet::point(int i) const {
    if (is_interior(i)) return interior[static_cast<size_t>(i)];
    if (is_origin(i)) return Vec2::Zero();
    if (is_far_field(i)) return far_field[static_cast<size_t>(i - origin_index() - 1)];
    throw SolverError("geometry-nodes", "node index out of range");
}

Points<Real> NodeSet::all_points() const {
    Points<Real> pts(size(), 2);
    for (int i = 0; i < size(); ++i) pts.row(i) = point(i).transpose();
    return pts;
}

Points<Real> NodeSet::far_field_points() const {
    Points<Real> pts(n_far_field(), 2);
    for (int i = 0; i < n_far_field(); ++i) pts.row(i) = far_field[static_cast<size_t>(i)].transpose();
    return pts;
}

namespace {

Real radical_inverse(int base, long long index) {
    Real value = 0.0;
    Real digit = 1.0 / base;
    while (index > 0) {
        value += digit * static_cast<Real>(index % base);
        index /= base;
        digit /= base;
    }
    return value;
}

bool on_far_field_line(const Vec2& p) {
    return std::abs(p[0] + p[1] - kDomainSide) <= kBoundaryTol;
}

bool at_origin(const Vec2& p) {
    return std::abs(p[0]) <= kBoundaryTol && std::abs(p[1]) <= kBoundaryTol;
}

} // namespace

std::vector<Vec2> halton_unit_square(int count) {
    if (count < 0) throw SolverError("geometry-nodes", "negative Halton count");
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>(count));
    for (long long k = 1; k <= count; ++k)
        pts.emplace_back(radical_inverse(2, k), radical_inverse(3, k));
    return pts;
}

NodeSet halton_nodeset(int total, int boundary_count) {
    if (total < 1) throw SolverError("geometry-nodes", "halton total must be positive");
    if (boundary_count < 1) throw SolverError("geometry-nodes", "boundary count must be positive");

    std::vector<Vec2> pts;
    for (const Vec2& u : halton_unit_square(total)) {
        Vec2 p = kDomainSide * u;
        if (p[0] + p[1] < kDomainSide) pts.push_back(p);
    }

    std::vector<Vec2> far;
    if (boundary_count == 1) {
        far.emplace_back(kDomainSide, 0.0);
    } else {
        for (int i = 0; i < boundary_count; ++i) {
            Real y = kDomainSide * static_cast<Real>(i) / static_cast<Real>(boundary_count - 1);
            far.emplace_back(kDomainSide - y, y);
        }
    }
    return partition_nodes(std::move(pts), std::move(far), "halton");
}

std::vector<Vec2> uniform_simplex_nodes(int degree) {
    if (degree < 1) throw SolverError("geometry-nodes", "degree must be positive");
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>((degree + 1) * (degree + 2) / 2));
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; j <= degree - i; ++j)
            pts.emplace_back(kDomainSide * i / degree, kDomainSide * j / degree);
    return pts;
}

std::vector<std::array<Vec2, 3>> simplex_net_cells(int net_degree) {
    if (net_degree < 1) throw SolverError("geometry-nodes", "net degree must be positive");
    const int d = net_degree;
    auto vertex = [d](int i, int j) { return Vec2(kDomainSide * i / d, kDomainSide * j / d); };
    std::vector<std::array<Vec2, 3>> cells;
    cells.reserve(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d - i; ++j) {
            cells.push_back({vertex(i, j), vertex(i + 1, j), vertex(i, j + 1)});
            if (i + j < d - 1)
                cells.push_back({vertex(i + 1, j), vertex(i, j + 1), vertex(i + 1, j + 1)});
        }
    return cells;
}

std::vector<Vec2> waldron_composite_nodes(int net_degree, int cell_degree) {
    if (cell_degree < 1) throw SolverError("geometry-nodes", "cell degree must be positive");
    std::vector<Vec2> pts;
    for (const auto& cell : simplex_net_cells(net_degree)) {
        const int d = cell_degree;
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b) {
                int c = d - a - b;
                pts.push_back((a * cell[0] + b * cell[1] + c * cell[2]) / d);
            }
    }
    return dedup_points(std::move(pts), kDedupTol);
}

NodeSet enrich_with_lines(const NodeSet& base) {
    constexpr int kLineNodes = 52;
    constexpr Real kAxisExtent = 2.5;
    constexpr Real kGapStart = 7.6;
    // diagonal levels x + y = a flanking the payoff kink, plus two far lines
    static const Real kLevels[] = {1.5, 1.8, 2.0, 2.1, 2.3, 2.5, 2.7, 7.1, 7.5};

    std::vector<Vec2> pts;
    for (const Vec2& p : base.interior)
        if (p[0] + p[1] <= kGapStart) pts.push_back(p);
    pts.emplace_back(0.0, 0.0);

    for (int k = 0; k < kLineNodes; ++k) {
        Real t = kAxisExtent * static_cast<Real>(k) / (kLineNodes - 1);
        pts.emplace_back(t, 0.0);
        pts.emplace_back(0.0, t);
    }

    for (Real a : kLevels)
        for (int k = 0; k < kLineNodes; ++k) {
            Real u = static_cast<Real>(k) / (kLineNodes - 1);
            pts.emplace_back(a * (1.0 - u), a * u);
        }

    NodeSet out = partition_nodes(dedup_points(std::move(pts), kDedupTol),
                                  base.far_field, base.generator + "+lines");
    out.waldron_fallback = base.waldron_fallback;
    return out;
}

std::vector<Vec2> dedup_points(std::vector<Vec2> pts, Real tol) {
    std::vector<Vec2> kept;
    kept.reserve(pts.size());
    for (const Vec2& p : pts) {
        bool dup = false;
        for (const Vec2& q : kept)
            if ((p - q).norm() < tol) { dup = true; break; }
        if (!dup) kept.push_back(p);
    }
    return kept;
}

NodeSet partition_nodes(std::vector<Vec2> pts, std::vector<Vec2> extra_far_field,
                        std::string generator) {
    NodeSet out;
    out.generator = std::move(generator);

    for (Vec2& p : extra_far_field) pts.push_back(p);
    pts = dedup_points(std::move(pts), kMergeTol);

    for (const Vec2& p : pts) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || p[0] < -kBoundaryTol ||
            p[1] < -kBoundaryTol || p[0] + p[1] > kDomainSide + kBoundaryTol)
            throw SolverError("geometry-nodes", "point outside domain");
        if (at_origin(p)) continue;            // origin slot is implicit
        if (on_far_field_line(p)) out.far_field.push_back(p);
        else out.interior.push_back(p);
    }

    std::stable_sort(out.far_field.begin(), out.far_field.end(),
                     [](const Vec2& a, const Vec2& b) { return a[1] < b[1]; });
    return out;
}

} // namespace mshep
