#pragma once

// Two-asset Black-Scholes model in time-to-maturity form: payoff, spatial
// operator, and the prescribed boundary data (origin and far field).

#include "mshep/types.hpp"

#include <algorithm>
#include <cmath>

namespace mshep {

struct MarketParams {
    Real rate = 0.03;
    Real sigma1 = 0.15;
    Real sigma2 = 0.15;
    Real correlation = 0.5;
    Real strike = 1.0;
    Real maturity = 1.0;

    void validate() const {
        if (sigma1 < 0 || sigma2 < 0) throw SolverError("bs-model", "volatility must be nonnegative");
        if (correlation < -1 || correlation > 1) throw SolverError("bs-model", "correlation must lie in [-1, 1]");
        if (!(strike > 0)) throw SolverError("bs-model", "strike must be positive");
        if (!(maturity > 0)) throw SolverError("bs-model", "maturity must be positive");
    }
};

// average basket call
inline Real payoff(const Vec2& x, const MarketParams& mp) {
    return std::max(0.5 * (x[0] + x[1]) - mp.strike, 0.0);
}

struct DerivativeBundle {
    Real value = 0;
    Vec2 grad = Vec2::Zero();
    Real hxx = 0, hxy = 0, hyy = 0;
};

// r(x P_x + y P_y) + (1/2)(s1^2 x^2 P_xx + s2^2 y^2 P_yy) + rho s1 s2 x y P_xy - r P
inline Real spatial_operator(const DerivativeBundle& d, const Vec2& x, const MarketParams& mp) {
    return mp.rate * (x[0] * d.grad[0] + x[1] * d.grad[1]) +
           0.5 * (mp.sigma1 * mp.sigma1 * x[0] * x[0] * d.hxx +
                  mp.sigma2 * mp.sigma2 * x[1] * x[1] * d.hyy) +
           mp.correlation * mp.sigma1 * mp.sigma2 * x[0] * x[1] * d.hxy - mp.rate * d.value;
}

// asymptotic value on x + y = 8; t is time since the payoff
inline Real far_field_value(const Vec2& x, Real t, const MarketParams& mp) {
    return 0.5 * (x[0] + x[1]) - mp.strike * std::exp(-mp.rate * t);
}

// the origin stays at the payoff value 0 for all t
inline Real near_field_value() { return 0.0; }

} // namespace mshep
