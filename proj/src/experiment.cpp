#include "mshep/experiment.hpp"

#include "mshep/io.hpp"
#include "mshep/rbf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace mshep {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// nodal values at one time level: trajectory at interior nodes, prescribed
// data at the origin and the far field
MatX full_nodal_matrix(const Trajectory& traj, const NodeSet& nodes, const MarketParams& mp) {
    const int M = static_cast<int>(traj.states.size()) - 1;
    const int n = nodes.size();
    MatX full(n, M);
    for (int l = 1; l <= M; ++l) {
        full.col(l - 1).head(nodes.n_interior()) = traj.states[static_cast<size_t>(l)];
        full(nodes.origin_index(), l - 1) = near_field_value();
        full.col(l - 1).tail(nodes.n_far_field()) =
            far_field_values(nodes.far_field_points(), mp, traj.times[static_cast<size_t>(l)]);
    }
    return full;
}

} // namespace

std::vector<Vec2> evaluation_grid(int resolution) {
    if (resolution < 2) throw SolverError("experiment-cli", "evaluation resolution too coarse");
    const Real h = kDomainSide / resolution;
    std::vector<Vec2> pts;
    for (int j = 0; j <= resolution; ++j)
        for (int i = 0; i <= resolution; ++i) {
            if (i == 0 && j == 0) continue;  // prescribed origin
            const Real x = i * h, y = j * h;
            if (x + y <= kDomainSide - h + kBoundaryTol) pts.emplace_back(x, y);
        }
    return pts;
}

NodeSet build_configuration(const ExperimentConfig& cfg) {
    if (cfg.configuration == "halton")
        return halton_nodeset(cfg.halton_total, cfg.halton_boundary);
    if (cfg.configuration == "uniform")
        return partition_nodes(uniform_simplex_nodes(cfg.uniform_degree), {}, "uniform");
    if (cfg.configuration == "waldron" || cfg.configuration == "waldron_lines") {
        NodeSet base = partition_nodes(
            waldron_composite_nodes(cfg.waldron_net, cfg.waldron_cell), {}, "waldron");
        base.waldron_fallback = true;
        return cfg.configuration == "waldron" ? base : enrich_with_lines(base);
    }
    if (cfg.configuration == "rbf_fig1") return rbf_nodeset_fig1();
    throw SolverError("experiment-cli", "unknown node configuration: " + cfg.configuration);
}

Eigen::SparseMatrix<Real> evaluation_operator(const ShepardBasis<Real>& basis,
                                              const std::vector<Vec2>& pts) {
    std::vector<Eigen::Triplet<Real>> trips;
    for (size_t k = 0; k < pts.size(); ++k) {
        const ShepardRow<Real> row = basis.row_values(pts[k]);
        for (const auto& e : row.entries)
            trips.emplace_back(static_cast<int>(k), e.node, e.value);
    }
    Eigen::SparseMatrix<Real> op(static_cast<int>(pts.size()), basis.n());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

MatX evaluate_trajectory(const Eigen::SparseMatrix<Real>& eval_op, const Trajectory& traj,
                         const NodeSet& nodes, const MarketParams& mp) {
    return eval_op * full_nodal_matrix(traj, nodes, mp);
}

MatX evaluate_trajectory(const MatX& eval_op, const Trajectory& traj, const NodeSet& nodes,
                         const MarketParams& mp) {
    return eval_op * full_nodal_matrix(traj, nodes, mp);
}

MatX evaluate_reference(const FDReference& ref, const std::vector<Vec2>& pts,
                        const std::vector<Real>& times) {
    MatX out(static_cast<int>(pts.size()), static_cast<int>(times.size()));
    for (size_t l = 0; l < times.size(); ++l)
        for (size_t k = 0; k < pts.size(); ++k)
            out(static_cast<int>(k), static_cast<int>(l)) = fd_interpolate(ref, pts[k], times[l]);
    return out;
}

void error_columns(const MatX& approx, const MatX& reference, std::vector<Real>& mean,
                   std::vector<Real>& max) {
    if (approx.rows() != reference.rows() || approx.cols() != reference.cols())
        throw SolverError("experiment-cli", "mismatched evaluation shapes");
    mean.resize(static_cast<size_t>(approx.cols()));
    max.resize(static_cast<size_t>(approx.cols()));
    for (int c = 0; c < approx.cols(); ++c) {
        const VecX d = (approx.col(c) - reference.col(c)).cwiseAbs();
        mean[static_cast<size_t>(c)] = d.mean();
        max[static_cast<size_t>(c)] = d.maxCoeff();
    }
}

ErrorReport measure_errors(const Trajectory& traj, const Eigen::SparseMatrix<Real>& eval_op,
                           const NodeSet& nodes, const MarketParams& mp,
                           const FDReference& ref, const std::vector<Vec2>& grid) {
    std::vector<Real> levels(traj.times.begin() + 1, traj.times.end());
    for (Real t : levels) {
        bool stored = false;
        for (Real rt : ref.times) stored = stored || std::abs(rt - t) <= 1e-12;
        if (!stored) throw SolverError("experiment-cli", "mismatched time grids");
    }

    ErrorReport rep;
    rep.times = levels;
    rep.cond_first = traj.cond_first;
    rep.cond_rest = traj.cond_rest;
    rep.n_interior = nodes.n_interior();
    rep.n_total = nodes.size();
    const MatX approx = evaluate_trajectory(eval_op, traj, nodes, mp);
    const MatX refv = evaluate_reference(ref, grid, levels);
    error_columns(approx, refv, rep.mean_ms, rep.max_ms);
    return rep;
}

ErrorReport run_experiment(const ExperimentConfig& cfg, const FDReference* shared_reference) {
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    auto path = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

    auto t0 = std::chrono::steady_clock::now();
    const NodeSet nodes = build_configuration(cfg);
    const Covering covering = build_covering(nodes, cfg.p, cfg.effective_q());
    const ShepardBasis<Real> basis(nodes, covering, ShepardParams<Real>{cfg.mu, 0});
    const SpatialSystem sys = assemble(nodes, basis, cfg.market);
    const double sec_build = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    RunOptions opts{cfg.steps, parse_scheme(cfg.scheme), cfg.freeze_boundary};
    const Trajectory traj = run(sys, nodes, cfg.market, opts);
    const double sec_solve = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    FDReference local_ref;
    const FDReference* ref = shared_reference;
    if (!ref) {
        const int mfd = cfg.effective_reference_steps();
        local_ref = fd_solve(cfg.market, cfg.reference_grid, mfd, mfd / cfg.steps);
        ref = &local_ref;
    }
    const double sec_reference = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const std::vector<Vec2> grid = evaluation_grid(cfg.evaluation_resolution);
    const Eigen::SparseMatrix<Real> eval_op = evaluation_operator(basis, grid);
    ErrorReport rep = measure_errors(traj, eval_op, nodes, cfg.market, *ref, grid);
    rep.seconds_build = sec_build;
    rep.seconds_solve = sec_solve;
    rep.seconds_reference = sec_reference;

    MatX rbf_approx;
    NodeSet rbf_nodes;
    if (cfg.rbf_compare) {
        rbf_nodes = rbf_nodeset_fig1();
        const RbfModel model(rbf_nodes, cfg.rbf_shape);
        const SpatialSystem rbf_sys = model.spatial_system(rbf_nodes, cfg.market);
        const Trajectory rbf_traj = run(rbf_sys, rbf_nodes, cfg.market, opts);
        rbf_approx = evaluate_trajectory(model.evaluation_rows(grid), rbf_traj, rbf_nodes, cfg.market);
        const MatX refv = evaluate_reference(*ref, grid, rep.times);
        error_columns(rbf_approx, refv, rep.mean_rbf, rep.max_rbf);
    }
    rep.seconds_measure = seconds_since(t0);

    // artifacts
    {
        std::ofstream os(path("nodes.txt"));
        write_nodes(os, nodes);
    }
    {
        std::ofstream os(path("covering.txt"));
        write_covering(os, covering);
    }
    {
        std::ofstream os(path("errors.csv"));
        if (cfg.rbf_compare) {
            os << "step,t,E_mean_MS,E_max_MS,E_mean_RBF,E_max_RBF\n";
            for (size_t l = 0; l < rep.times.size(); ++l)
                os << (l + 1) << ',' << format_sci(rep.times[l], 5) << ','
                   << format_sci(rep.mean_ms[l], 5) << ',' << format_sci(rep.max_ms[l], 5) << ','
                   << format_sci(rep.mean_rbf[l], 5) << ',' << format_sci(rep.max_rbf[l], 5) << '\n';
        } else {
            os << "step,t,E_mean_MS,E_max_MS\n";
            for (size_t l = 0; l < rep.times.size(); ++l)
                os << (l + 1) << ',' << format_sci(rep.times[l], 5) << ','
                   << format_sci(rep.mean_ms[l], 5) << ',' << format_sci(rep.max_ms[l], 5) << '\n';
        }
    }
    {
        // |approx - reference| at the final level over the evaluation grid
        const MatX refv = evaluate_reference(*ref, grid, {rep.times.back()});
        const MatX approx = evaluate_trajectory(eval_op, traj, nodes, cfg.market);
        std::ofstream os(path("error_surface.csv"));
        os << "x,y,abs_error\n";
        for (size_t k = 0; k < grid.size(); ++k)
            os << format_sci(grid[k][0], 17) << ',' << format_sci(grid[k][1], 17) << ','
               << format_sci(std::abs(approx(static_cast<int>(k), approx.cols() - 1) - refv(static_cast<int>(k), 0)), 5)
               << '\n';
    }
    {
        std::ofstream os(path("sparsity.txt"));
        const int n_i = sys.n_interior;
        long nnz = 0;
        int max_support = 0;
        std::vector<int> support(static_cast<size_t>(n_i), 0);
        for (int r = 0; r < n_i; ++r) {
            int s = 0;
            for (int c = 0; c < sys.A.cols(); ++c) s += std::abs(sys.A(r, c)) > 1e-14;
            for (int c = 0; c < sys.boundary.cols(); ++c) s += std::abs(sys.boundary(r, c)) > 1e-14;
            support[static_cast<size_t>(r)] = s;
            nnz += s;
            max_support = std::max(max_support, s);
        }
        os << "rows " << n_i << '\n'
           << "cols " << (sys.A.cols() + sys.boundary.cols()) << '\n'
           << "nnz " << nnz << '\n'
           << "fill_fraction " << format_sci(static_cast<Real>(nnz) / (static_cast<Real>(n_i) * (sys.A.cols() + sys.boundary.cols())), 5) << '\n'
           << "max_row_support " << max_support << '\n';
        for (int r = 0; r < n_i; ++r) os << r << ' ' << support[static_cast<size_t>(r)] << '\n';
    }
    if (cfg.write_matrices) {
        std::ofstream osa(path("A.txt"));
        write_matrix_coo(osa, sys.A);
        std::ofstream osb(path("B.txt"));
        write_matrix_coo(osb, sys.boundary);
    }
    {
        std::ofstream os(path("report.txt"));
        os << "# effective experiment parameters\n" << cfg.report_text();
        os << "n_interior = " << nodes.n_interior() << '\n'
           << "n_far_field = " << nodes.n_far_field() << '\n'
           << "n_total = " << nodes.size() << '\n'
           << "generator = " << nodes.generator
           << (nodes.waldron_fallback ? " (composite fallback)" : "") << '\n'
           << "covering_max_q_used = " << covering.max_q_used << '\n'
           << "evaluation_points = " << grid.size() << '\n'
           << "cond_first = " << format_sci(rep.cond_first, 5) << '\n'
           << "cond_rest = " << format_sci(rep.cond_rest, 5) << '\n';
    }
    {
        std::ofstream os(path("timings.txt"));
        os << "build_seconds " << rep.seconds_build << '\n'
           << "solve_seconds " << rep.seconds_solve << '\n'
           << "reference_seconds " << rep.seconds_reference << '\n'
           << "measure_seconds " << rep.seconds_measure << '\n';
    }
    return rep;
}

} // namespace mshep
