#pragma once

#include <functional>
#include <vector>

#include "folab/config.hpp"
#include "folab/ode.hpp"
#include "folab/oneform.hpp"

namespace folab {

// All maps in this module work on germs in adapted coordinates (u, v):
// the invariant curve carrying the loop is {v = 0}, u runs along it, and
// transversals are v-discs {u = const}.

struct Transversal {
    Cplx base_u{0};
    double radius = 0.4;    // transversal disc radius in v
    double theta_min = 0.1; // transversality margin (radians)
};

struct LoopSpec {
    Cplx center{0}; // singular point being encircled (u-coordinate)
    Cplx base_u{0}; // basepoint: the circle passes through it
    double turns = 1.0;
    int samples = 64;
};

struct JetEstimate {
    JetDiffeo jet;
    std::vector<double> error_bars; // per coefficient 1..order
    bool consistent = true;         // two-radius cross-validation
    double max_disagreement = 0;    // worst error bar relative to max(1, |a_j|)
    double c0_abs = 0;              // |constant coefficient| before dropping it
};

// Taylor coefficients of an analytic germ z -> f(z), f(0) = 0, from uniform
// circle samples at radii rho and rho/2 (discrete Cauchy integrals).
JetEstimate jet_from_map(const std::function<Cplx(Cplx)>& f, double rho, int order, int samples);

struct HolonomyJet {
    JetEstimate est;
    Cplx multiplier{0};
    bool computed_via_inverse = false; // lifted the reversed loop and inverted
    LoopSpec loop;
    Transversal transversal;
};

// Return map of the loop on the transversal {u = base_u}, positive turns
// counterclockwise in u. `avoid` lists other singular u-values which the
// circle must clear by half its radius.
HolonomyJet holonomy_jet(const OneForm& adapted, const LoopSpec& loop, const Transversal& trans,
                         int order, const Config& cfg, const std::vector<Cplx>& avoid = {});

struct IndexMatchReport {
    Cplx multiplier{0};
    Cplx expected{0}; // exp(2 pi i * cs_index)
    double deviation = 0;
    bool pass = false;
};
IndexMatchReport multiplier_matches_index(const HolonomyJet& h, Cplx cs_index, double tol);

// Transport a point along its leaf of the regular foliation wL to the
// parametrized target curve; returns the target parameter. Newton over the
// parameter with incremental path lifting.
Cplx leaf_transport(const OneForm& wL, Cplx from_u, Cplx from_v, const CurveGerm& target,
                    double tol, double tube = 3.0);

// Dulac map of a corner germ of an absolutely dicritical fibration, in
// adapted coordinates: from the branch {v = 0} (parametrized by u) to the
// branch {u = 0} (parametrized by v), following the leaves.
JetEstimate dulac_map(const OneForm& wL_corner, int order, const Config& cfg, double rho = 0.1);

// Projection along the leaves of the regular foliation wL from `source` to
// `target` (both germs through the origin, transverse to the leaves).
JetEstimate project_along_leaves(const OneForm& wL, const CurveGerm& source,
                                 const CurveGerm& target, int order, const Config& cfg,
                                 double rho = 0.1);

} // namespace folab
