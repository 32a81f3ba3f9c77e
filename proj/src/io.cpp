#include "mshep/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace mshep {

std::string format_sci(Real v, int significant_digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", significant_digits - 1, v);
    return buf;
}

void write_nodes(std::ostream& os, const NodeSet& nodes) {
    auto line = [&](const Vec2& p, const char* role) {
        os << format_sci(p[0], 17) << ' ' << format_sci(p[1], 17) << ' ' << role << '\n';
    };
    for (int i = 0; i < nodes.size(); ++i) {
        const char* role = nodes.is_interior(i) ? "interior"
                         : nodes.is_origin(i) ? "origin" : "farfield";
        line(nodes.point(i), role);
    }
}

void write_covering(std::ostream& os, const Covering& cov) {
    for (int j = 0; j < cov.subsets.rows(); ++j) {
        os << j << " :";
        for (int s = 0; s < cov.tau; ++s) os << ' ' << cov.subsets(j, s);
        os << '\n';
    }
}

void write_matrix_coo(std::ostream& os, const MatX& m, Real drop_tol) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (std::abs(m(r, c)) > drop_tol)
                os << r << ' ' << c << ' ' << format_sci(m(r, c), 17) << '\n';
}

} // namespace mshep
