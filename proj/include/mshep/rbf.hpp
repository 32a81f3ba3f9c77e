#pragma once

// Global multiquadric collocation baseline with an appended constant term
// under the standard zero-sum side condition (so constants are reproduced
// exactly).  Produces spatial matrices in the same shape as `assembly` so the
// time stepper is shared.

#include "mshep/assembly.hpp"
#include "mshep/bs_model.hpp"
#include "mshep/nodes.hpp"
#include "mshep/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mshep {

inline constexpr Real kRbfCondLimit = 1e14;

class RbfModel {
public:
    // shape <= 0 resolves to 2 x mean nearest-neighbor spacing
    RbfModel(const NodeSet& nodes, Real shape);

    int n() const { return static_cast<int>(centers_.rows()); }
    Real shape() const { return shape_; }
    const MatX& interpolation_matrix() const { return system_; }

    // interpolation of nodal data evaluated at arbitrary points: one row of
    // weights per point, columns indexed like the NodeSet
    MatX evaluation_rows(const std::vector<Vec2>& pts) const;

    // L applied to the interpolant, partitioned like `assemble`
    SpatialSystem spatial_system(const NodeSet& nodes, const MarketParams& mp) const;

private:
    Points<Real> centers_;
    Real shape_ = 0;
    MatX system_;  // bordered (n+1) x (n+1) multiquadric matrix
    Eigen::PartialPivLU<MatX> lu_;
};

Real rbf_auto_shape(const NodeSet& nodes);

// Deterministic stand-in for the graded 370 + 20 distribution: interior
// points generated from the Halton sequence through an inverse-CDF map that
// concentrates the diagonal coordinate s = x + y near the payoff kink s = 2,
// plus 20 equispaced far-field nodes.
NodeSet rbf_nodeset_fig1();

} // namespace mshep
