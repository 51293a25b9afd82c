#pragma once

#include <optional>
#include <vector>

#include "folab/series.hpp"

namespace folab {

struct PolyRoot {
    Cplx value;
    double residual; // |p(root)| relative to coefficient scale
    bool exact;      // closed-form root of a degree <= 2 factor
};

// Roots of c[0] + c[1] z + ... + c[d] z^d. Trailing ~zero coefficients are
// dropped (relative eps); degree <= 2 solved in closed form, otherwise
// companion-matrix eigenvalues with a residual report per root.
std::vector<PolyRoot> poly_roots(const std::vector<Cplx>& coeffs, double eps);

// Same, with multiple roots merged: a k-fold zero at the origin is read off
// the valuation exactly, remaining eigenvalue clusters within
// 1e-4 * max(1,|z|) collapse to their mean. One entry per distinct root,
// with its multiplicity.
struct ClusteredRoot {
    Cplx value;
    int multiplicity;
    double residual;
    bool exact;
};
std::vector<ClusteredRoot> clustered_roots(const std::vector<Cplx>& coeffs, double eps);

// Bounded rationality test: true iff |Im z| < tol and Re z is within tol of
// a fraction p/q with |q| <= q_max (continued fractions).
struct RationalHit {
    long long p;
    long long q;
};
std::optional<RationalHit> rational_approx(Cplx z, long q_max, double tol);
bool is_rational(Cplx z, long q_max, double tol);

// Hermitian angle between complex directions in C^2, in [0, pi/2].
double direction_angle(Cplx v1, Cplx v2, Cplx w1, Cplx w2);

} // namespace folab
