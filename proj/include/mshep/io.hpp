#pragma once

// Plain-text exports: node tables, covering tables, coordinate-format
// matrices.

#include "mshep/covering.hpp"
#include "mshep/nodes.hpp"
#include "mshep/types.hpp"

#include <iosfwd>
#include <string>

namespace mshep {

// one "x y role" line per node, 17 significant digits
void write_nodes(std::ostream& os, const NodeSet& nodes);

// one "j : i_1 ... i_tau" line per subset
void write_covering(std::ostream& os, const Covering& cov);

// "row col value" lines for entries with |value| > drop_tol
void write_matrix_coo(std::ostream& os, const MatX& m, Real drop_tol = 1e-14);

std::string format_sci(Real v, int significant_digits);

} // namespace mshep
