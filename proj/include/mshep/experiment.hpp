#pragma once

// Configuration-driven experiment pipeline: build a node configuration,
// solve with the multinode Shepard collocation (and optionally the
// multiquadric baseline), measure errors against the finite-difference
// reference on a regular evaluation grid, and write plot-ready tables.

#include "mshep/assembly.hpp"
#include "mshep/bs_model.hpp"
#include "mshep/covering.hpp"
#include "mshep/fd_reference.hpp"
#include "mshep/nodes.hpp"
#include "mshep/shepard.hpp"
#include "mshep/timestepper.hpp"

#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace mshep {

struct ExperimentConfig {
    // [nodes]
    std::string configuration = "halton";  // halton | uniform | waldron | waldron_lines | rbf_fig1
    int halton_total = 5000;
    int halton_boundary = 141;
    int uniform_degree = 70;
    int waldron_net = 7;
    int waldron_cell = 10;

    MarketParams market;

    // [shepard]
    Real mu = 4;

    // [covering]
    int p = 2;
    int q = 0;  // 0 resolves to 30 for the waldron configurations, 10 otherwise

    // [time]
    int steps = 20;
    std::string scheme = "bdf2";
    bool freeze_boundary = false;

    // [reference]
    int reference_grid = 512;
    int reference_steps = 512;  // rounded up to a multiple of `steps`

    // [evaluation]
    int evaluation_resolution = 64;

    // [rbf]
    bool rbf_compare = true;
    Real rbf_shape = 0;  // 0 resolves to 2 x mean nearest-neighbor spacing

    // [output]
    std::string out_dir = "out";
    bool write_matrices = false;

    static ExperimentConfig from_file(const std::string& path);
    void validate() const;
    int effective_q() const;
    int effective_reference_steps() const;
    std::string report_text() const;  // full provenance block
};

struct ErrorReport {
    std::vector<Real> times;  // levels 1..M
    std::vector<Real> mean_ms, max_ms;
    std::vector<Real> mean_rbf, max_rbf;  // empty when the baseline is off
    Real cond_first = 0, cond_rest = 0;
    int n_interior = 0, n_total = 0;
    double seconds_build = 0, seconds_solve = 0, seconds_reference = 0, seconds_measure = 0;
};

// regular lattice of spacing 8/resolution with x + y <= 8 - 8/resolution,
// excluding the prescribed origin
std::vector<Vec2> evaluation_grid(int resolution);

NodeSet build_configuration(const ExperimentConfig& cfg);

// sparse matrix of cardinal-basis values: one row per evaluation point,
// columns indexed like the NodeSet
Eigen::SparseMatrix<Real> evaluation_operator(const ShepardBasis<Real>& basis,
                                              const std::vector<Vec2>& pts);

// solution values at the evaluation points for levels 1..M (one column per
// level); boundary nodes contribute their prescribed values
MatX evaluate_trajectory(const Eigen::SparseMatrix<Real>& eval_op, const Trajectory& traj,
                         const NodeSet& nodes, const MarketParams& mp);
MatX evaluate_trajectory(const MatX& eval_op, const Trajectory& traj, const NodeSet& nodes,
                         const MarketParams& mp);

// reference values at the same points and levels
MatX evaluate_reference(const FDReference& ref, const std::vector<Vec2>& pts,
                        const std::vector<Real>& times);

// columnwise mean/max of |approx - reference|
void error_columns(const MatX& approx, const MatX& reference, std::vector<Real>& mean,
                   std::vector<Real>& max);

ErrorReport measure_errors(const Trajectory& traj, const Eigen::SparseMatrix<Real>& eval_op,
                           const NodeSet& nodes, const MarketParams& mp,
                           const FDReference& ref, const std::vector<Vec2>& grid);

// full pipeline; artifacts land in cfg.out_dir.  A prebuilt reference can be
// shared across experiments with identical market/time/reference settings.
ErrorReport run_experiment(const ExperimentConfig& cfg,
                           const FDReference* shared_reference = nullptr);

} // namespace mshep
