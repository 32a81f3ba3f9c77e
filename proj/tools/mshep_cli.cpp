// Experiment runner for the meshless Black-Scholes solver.
//
//   mshep run <config>        solve, measure errors, write tables
//   mshep nodes <config>      emit the node set and covering only
//   mshep reference <config>  emit the finite-difference reference only

#include "mshep/experiment.hpp"
#include "mshep/io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace mshep;

void cmd_run(ExperimentConfig cfg) {
    const ErrorReport rep = run_experiment(cfg);
    std::cout << "nodes: " << rep.n_total << " (" << rep.n_interior << " interior)\n"
              << "cond(startup) = " << format_sci(rep.cond_first, 5)
              << ", cond(main) = " << format_sci(rep.cond_rest, 5) << '\n';
    for (size_t l = 0; l < rep.times.size(); ++l) {
        std::cout << "step " << (l + 1) << "  t=" << format_sci(rep.times[l], 5)
                  << "  E_mean=" << format_sci(rep.mean_ms[l], 5)
                  << "  E_max=" << format_sci(rep.max_ms[l], 5);
        if (!rep.mean_rbf.empty())
            std::cout << "  E_mean_rbf=" << format_sci(rep.mean_rbf[l], 5)
                      << "  E_max_rbf=" << format_sci(rep.max_rbf[l], 5);
        std::cout << '\n';
    }
    std::cout << "tables written to " << cfg.out_dir << '\n';
}

void cmd_nodes(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const NodeSet nodes = build_configuration(cfg);
    const Covering covering = build_covering(nodes, cfg.p, cfg.effective_q());
    {
        std::ofstream os(fs::path(cfg.out_dir) / "nodes.txt");
        write_nodes(os, nodes);
    }
    {
        std::ofstream os(fs::path(cfg.out_dir) / "covering.txt");
        write_covering(os, covering);
    }
    std::cout << "nodes: " << nodes.size() << " (" << nodes.n_interior() << " interior, "
              << nodes.n_far_field() << " far-field)\nwritten to " << cfg.out_dir << '\n';
}

void cmd_reference(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const int mfd = cfg.effective_reference_steps();
    const FDReference ref = fd_solve(cfg.market, cfg.reference_grid, mfd, mfd / cfg.steps);
    std::ofstream os(fs::path(cfg.out_dir) / "u_star.txt");
    const int N = ref.grid_n;
    const VecX& final_slice = ref.slices.back();
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i)
            os << format_sci(i * ref.h(), 17) << ' ' << format_sci(j * ref.h(), 17) << ' '
               << format_sci(final_slice[j * (N + 1) + i], 17) << '\n';
    std::cout << "reference grid " << N << ", " << ref.steps << " steps, final slice written to "
              << cfg.out_dir << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"meshless collocation solver for the two-asset Black-Scholes equation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, scheme;
    bool seedless = true;

    auto add_common = [&](CLI::App* sub, bool with_scheme) {
        sub->add_option("config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_flag("--seedless", seedless, "deterministic generators (always on)");
        if (with_scheme) sub->add_option("--scheme", scheme, "bdf1, bdf2, or bdf3 (overrides config)");
    };

    CLI::App* sub_run = app.add_subcommand("run", "solve and write error tables");
    CLI::App* sub_nodes = app.add_subcommand("nodes", "emit the node set only");
    CLI::App* sub_ref = app.add_subcommand("reference", "emit the reference solution only");
    add_common(sub_run, true);
    add_common(sub_nodes, false);
    add_common(sub_ref, false);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = mshep::ExperimentConfig::from_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!scheme.empty()) cfg.scheme = scheme;
        cfg.validate();
        if (sub_run->parsed()) cmd_run(cfg);
        else if (sub_nodes->parsed()) cmd_nodes(cfg);
        else cmd_reference(cfg);
    } catch (const mshep::SolverError& e) {
        std::cerr << '[' << e.module() << "] " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "[error] " << e.what() << '\n';
        return 2;
    }
    return 0;
}
