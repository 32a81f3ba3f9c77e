#pragma once

// Implicit time stepping for the semi-discrete system dP/dt = A P + B b(t):
// Backward Euler startup, BDF2 main scheme, optional BDF3.  Each distinct
// iteration matrix is factored exactly once per run.

#include "mshep/assembly.hpp"
#include "mshep/bs_model.hpp"
#include "mshep/nodes.hpp"
#include "mshep/types.hpp"

#include <string>
#include <vector>

namespace mshep {

enum class Scheme { bdf1, bdf2, bdf3 };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct Trajectory {
    std::vector<Real> times;       // size steps+1, times[0] = 0, times[steps] = T
    std::vector<VecX> states;      // interior values per time level
    std::vector<Real> step_sizes;  // size steps, all equal to T/steps
    Real cond_first = 0;           // 2-norm condition estimate, startup matrix
    Real cond_rest = 0;            // same for the main scheme's matrix
    int factorizations = 0;
};

struct RunOptions {
    int steps = 20;
    Scheme scheme = Scheme::bdf2;
    // freeze the far-field data at its first-step value instead of
    // re-evaluating b(t) every step
    bool freeze_boundary = false;
};

VecX initial_condition(const NodeSet& nodes, const MarketParams& mp);

VecX step_bdf1(const SpatialSystem& sys, const MarketParams& mp, const VecX& prev,
               Real dt, Real t_next);
VecX step_bdf2(const SpatialSystem& sys, const MarketParams& mp, const VecX& prev,
               const VecX& prev2, Real dt, Real t_next);

Trajectory run(const SpatialSystem& sys, const NodeSet& nodes, const MarketParams& mp,
               const RunOptions& opts);

} // namespace mshep
