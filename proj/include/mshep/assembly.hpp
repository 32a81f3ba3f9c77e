#pragma once

// Spatial collocation matrices: row k applies the Black-Scholes operator to
// the cardinal expansion at interior node x_k.  Columns split by node role;
// the origin column is dropped (its prescribed value is identically zero)
// unless a debug mode retains it.

#include "mshep/bs_model.hpp"
#include "mshep/covering.hpp"
#include "mshep/nodes.hpp"
#include "mshep/shepard.hpp"
#include "mshep/types.hpp"

namespace mshep {

struct SpatialSystem {
    MatX A;                       // n_interior x n_interior
    MatX boundary;                // n_interior x n_far_field
    VecX origin_column;           // size 0 unless assembled with keep_origin_column
    Points<Real> far_field_pts;   // coordinates backing the boundary columns
    int n_interior = 0;
};

struct BoundaryVector {
    Real t = 0;
    VecX values;  // one per far-field node
};

SpatialSystem assemble(const NodeSet& nodes, const ShepardBasis<Real>& basis,
                       const MarketParams& mp, bool keep_origin_column = false);

BoundaryVector boundary_vector(const NodeSet& nodes, const MarketParams& mp, Real t);

// shared with the time stepper, which carries coordinates rather than a NodeSet
VecX far_field_values(const Points<Real>& pts, const MarketParams& mp, Real t);

} // namespace mshep
