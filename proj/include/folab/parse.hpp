#pragma once

#include <string>

#include "folab/oneform.hpp"

namespace folab {

// Text grammar for polynomial 1-forms:
//   omega = <poly> dx + <poly> dy
//   omega = d(<poly>)
// Polynomials in x, y with integer, decimal, or (re,im) complex literals;
// '^' powers; implicit multiplication by juxtaposition; '#' comments;
// whitespace-insensitive. Throws ParseError with line/column.
OneForm parse_oneform(const std::string& text);

// Canonical serialization that re-parses to the same OneForm (full-precision
// coefficients, one monomial per term).
std::string oneform_to_text(const OneForm& w);

} // namespace folab
