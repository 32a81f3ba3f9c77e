#pragma once

// Node generators and the interior/origin/far-field partition on the
// triangle with vertices (0,0), (8,0), (0,8).

#include "mshep/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace mshep {

// classification tolerance for the far-field line x + y = 8 and the origin
inline constexpr Real kBoundaryTol = 1e-12;
// pairs closer than this are merged (first occurrence wins)
inline constexpr Real kMergeTol = 1e-9;
// duplicate filter used by the enrichment step
inline constexpr Real kDedupTol = 1e-10;

// Collocation points partitioned by role.  Global index layout: interior
// nodes 0..n_interior-1, then the origin, then the far-field nodes on
// x + y = 8 sorted by ascending y.
struct NodeSet {
    std::vector<Vec2> interior;
    std::vector<Vec2> far_field;
    std::string generator;
    bool waldron_fallback = false;

    int n_interior() const { return static_cast<int>(interior.size()); }
    int n_far_field() const { return static_cast<int>(far_field.size()); }
    int size() const { return n_interior() + 1 + n_far_field(); }
    int origin_index() const { return n_interior(); }

    bool is_interior(int i) const { return i >= 0 && i < n_interior(); }
    bool is_origin(int i) const { return i == origin_index(); }
    bool is_far_field(int i) const { return i > origin_index() && i < size(); }

    Vec2 point(int i) const;
    Points<Real> all_points() const;        // size() x 2, in index order
    Points<Real> far_field_points() const;  // n_far_field() x 2
};

// Halton sequence in (0,1)^2, bases 2 and 3, starting at index 1.
std::vector<Vec2> halton_unit_square(int count);

// Scales `total` Halton points to (0,8)^2, keeps those with x + y < 8 as
// interior nodes, and adds `boundary_count` equispaced far-field nodes.
NodeSet halton_nodeset(int total, int boundary_count);

// Uniform degree-d distribution: (8i/d, 8j/d) for i + j <= d.
std::vector<Vec2> uniform_simplex_nodes(int degree);

// Corners of the net_degree^2 congruent cells of the uniform triangular net.
std::vector<std::array<Vec2, 3>> simplex_net_cells(int net_degree);

// Composite distribution: a uniform degree-`cell_degree` point set mapped
// affinely into every cell of the degree-`net_degree` net, duplicates on
// shared edges removed.  Stands in for the Waldron construction.
std::vector<Vec2> waldron_composite_nodes(int net_degree, int cell_degree);

// Adds 52-point equispaced segments on x=0, y=0 (up to 2.5) and on the
// diagonals x + y = a for a in {1.5, 1.8, 2, 2.1, 2.3, 2.5, 2.7, 7.1, 7.5},
// endpoints included, and removes interior nodes with x + y > 7.6.
NodeSet enrich_with_lines(const NodeSet& base);

// Keeps the first point of every cluster of diameter < tol.
std::vector<Vec2> dedup_points(std::vector<Vec2> pts, Real tol);

// Classifies raw points by role, merges pairs closer than kMergeTol, and
// appends `extra_far_field` after classification.  The origin node is always
// present in the result.  Points outside the closed triangle are an error.
NodeSet partition_nodes(std::vector<Vec2> pts,
                        std::vector<Vec2> extra_far_field = {},
                        std::string generator = {});

} // namespace mshep
