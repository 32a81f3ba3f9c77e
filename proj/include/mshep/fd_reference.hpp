#pragma once

// Second-order finite-difference reference on the square [0,8]^2: central
// stencils throughout (every x-derivative term carries a factor of x, so the
// degenerate axis rows need no one-sided differences), Dirichlet far-field
// values on the edges x=8 and y=8, BDF1 startup then BDF2.

#include "mshep/bs_model.hpp"
#include "mshep/types.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace mshep {

// discrete operator on the N^2 unknowns (i,j) in [0,N-1]^2, ordered j*N+i;
// `edge` scatters the 2N+1 Dirichlet values on x=8 / y=8 into the stencils
struct FDOperator {
    int grid_n = 0;
    Eigen::SparseMatrix<Real> interior;  // N^2 x N^2
    Eigen::SparseMatrix<Real> edge;      // N^2 x (2N+1)
};

FDOperator build_fd_operator(const MarketParams& mp, int grid_n);

// Dirichlet edge points in the column order used by FDOperator::edge:
// (8, j h) for j = 0..N-1, then (i h, 8) for i = 0..N-1, then (8, 8)
std::vector<Vec2> fd_edge_points(int grid_n);

struct FDReference {
    int grid_n = 0;
    Real dt = 0;
    int steps = 0;
    std::vector<Real> times;    // stored slice times
    std::vector<VecX> slices;   // full (N+1)^2 grid values, row-major j*(N+1)+i
    Real h() const { return kDomainSide / grid_n; }
};

// store_every > 1 keeps only every that-many-th time level (plus t=0)
FDReference fd_solve(const MarketParams& mp, int grid_n, int steps, int store_every = 1);

// bilinear interpolation on a stored slice
Real fd_interpolate(const FDReference& ref, const Vec2& x, Real t);

} // namespace mshep
