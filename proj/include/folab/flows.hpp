#pragma once

#include <vector>

#include "folab/oneform.hpp"

namespace folab {

// P d/dx + Q d/dy
struct VectorField {
    TruncSeries2 P;
    TruncSeries2 Q;

    VectorField(TruncSeries2 p, TruncSeries2 q);
    // X_q = (dq/dy) d/dx - (dq/dx) d/dy, tangent to the level sets of q
    static VectorField hamiltonian(const TruncSeries2& q);
    int order() const { return std::min(P.order(), Q.order()); }
};

// X(g) = P dg/dx + Q dg/dy (one order lost to differentiation)
TruncSeries2 apply_field(const VectorField& X, const TruncSeries2& g);

// g o exp[f]X = sum f^i / i! X^i(g). Terminates at jet order when f*X raises
// valuation; otherwise summed to numerical convergence. Throws when the terms
// do not decay (valuation-0 divergence).
TruncSeries2 lie_series(const TruncSeries2& g, const TruncSeries2& f, const VectorField& X,
                        double eps);

// (x, y) o exp[f]X as a jet map
JetMap2 exp_flow(const TruncSeries2& f, const VectorField& X, int order, double eps);

// Solve (x+y) o exp[tau^(n-1) alpha]X = f_target for alpha, where f_target
// has the shape (1 + tau^n h)(x+y), n >= 2.
TruncSeries2 solve_alpha(const TruncSeries2& f_target, const VectorField& X,
                         const TruncSeries2& tau, int n, int order, double eps);

// <Phi> = (omega_L wedge Phi^* omega_L) / (dx wedge dy), via the expanded
// partial-derivative formula.
TruncSeries2 pairing(const JetMap2& phi, const OneForm& wL, double eps);

struct SolveUResult {
    TruncSeries2 u;
    int remainder_valuation; // of <Phi_{f-uq}> under division by q
    JetMap2 phi;             // exp[f - uq] X_q
    int rounds;
};

// Lemma-18-style divisibility solve: find u with q | <Phi_{f-uq}> through the
// truncation order. Requires val(f) >= n_min and h = c q_y - d q_x nonzero.
SolveUResult solve_u(const TruncSeries2& f, const TruncSeries2& q, const OneForm& wL, int order,
                     int n_min, double eps);

// Conjugator phi with phi'(0) = 1 and phi o h o phi^{-1} = h'(0) z.
// Throws SmallDivisor when |mu^j - mu| <= delta_small for some 2 <= j <= N.
JetDiffeo linearize_jet(const JetDiffeo& h, double delta_small = 1e-6);

struct CentralizerReport {
    bool resonant = false;        // some |mu^j - mu| below the guard
    int resonant_power = 0;
    std::vector<double> divisors; // |mu^j - mu| for j = 2..N
    std::vector<double> forced;   // |a_j| of the solved commuting jet
    bool identity_forced = false; // all forced coefficients ~ 0
    double max_forced = 0;
};

// Solve psi o h = h o psi with psi'(0) = 1 order by order; for a
// non-resonant multiplier every coefficient is forced to zero.
CentralizerReport centralizer_forcing(const JetDiffeo& h, int order, double guard = 1e-6);

// Precondition helper: throws unless psi'(0) = 1; returns the commutation
// residual max |(psi o h - h o psi)_j|.
double centralizer_candidate_residual(const JetDiffeo& h, const JetDiffeo& psi);

} // namespace folab
