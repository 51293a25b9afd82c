#pragma once

#include <string>
#include <vector>

#include "folab/holonomy.hpp"
#include "folab/reduction.hpp"

namespace folab {

// Jet of the smooth branch {q = 0} through the origin as a graph v = t(u);
// requires the v-gradient to dominate (callers orient the germ first).
TruncSeries1 implicit_branch(const TruncSeries2& q, int order, double eps);

// Jet of the invariant curve of a reduced-nondegenerate germ tangent to the
// direction dv/du = slope, as a graph v = w(u).
TruncSeries1 invariant_branch(const OneForm& germ, Cplx slope, int order, double eps);

// Leaf of a regular foliation through the origin, transverse to {v = 0},
// as a graph u = g(v) (Picard iteration).
TruncSeries1 leaf_jet_through_origin(const OneForm& wL, int order, double eps);

struct TangentBranch {
    int point_id = -1; // -1 for the origin germ
    Cplx slope{0};     // dv/du of the branch in the adapted frame
    CurveGerm curve;   // parametrized by u
    double min_sep_angle = 0;
};

struct TangentCurve {
    TruncSeries2 q; // d a - c b in base coordinates
    std::vector<TangentBranch> branches;
};

// Tangency locus of two foliations. For a reduced origin, one branch at the
// origin; otherwise the input is desingularized and local branches are
// extracted at every active singular point (in adapted frames).
TangentCurve tangent_curve(const OneForm& wF, const OneForm& wL, int order, const Config& cfg);

// local tangent branch of adapted germs at a reduced point
TangentBranch tangent_branch_local(const OneForm& F_germ, const OneForm& L_germ, int order,
                                   double eps);

struct SlidingLocal {
    JetEstimate jet;
    Cplx multiplier{0};
    Cplx tangent_slope{0};
    bool computed_via_inverse = false;
};

// Sliding of a reduced-nondegenerate adapted germ pair onto `target`
// (a curve through the point, typically the divisor branch {v=0}):
// blow up once, lift the generator loop of the punctured exceptional line on
// the tangent-curve transversal, project along the fibration leaves.
// `orientation` fixes the generator: +1 encircles the {v=0}-direction
// puncture counterclockwise.
SlidingLocal sliding_jet(const OneForm& F_germ, const OneForm& L_germ, const CurveGerm& target,
                         double orientation, int order, const Config& cfg, double rho = 0.15);

// ---- fibration pullback along a computed reduction ----

struct FibrationPullback {
    std::vector<OneForm> strict_by_chart; // indexed like tree.charts
    std::vector<int> mult_by_comp;        // divisor multiplicities of sigma* omega_L
    bool absolutely_dicritical = false;
    bool sep_transverse = true; // Sep(F) transverse to the fibration leaves
    std::vector<std::string> failures;
};

FibrationPullback pull_fibration(const Reduction& red, const OneForm& wL, const Config& cfg);

// adapted (F, L) germ pair at a singular point, oriented for `component`
struct AdaptedPair {
    OneForm F_germ;
    OneForm L_germ;
    double orientation = 1.0;
};
AdaptedPair adapted_pair_at(const Reduction& red, const FibrationPullback& fib,
                            const SingularPoint& p, int component, const Config& cfg);

struct SlidingEntry {
    int point_id = -1;
    int component = -1;
    int chart_id = -1;
    Cplx coord{0};
    SlidingLocal local;
    bool derived_from_dulac = false;
};

struct SlidingSet {
    std::vector<SlidingEntry> entries;
};

// One jet per (component, singular point); corner second entries derived by
// pushing the first entry through the Dulac map of the fibration.
SlidingSet sliding_set(const Reduction& red, const FibrationPullback& fib, int order,
                       const Config& cfg);

struct SlidingCompareRow {
    int component = -1;
    Cplx coord{0};
    double deviation = 0;
};
struct SlidingCompare {
    std::vector<SlidingCompareRow> rows;
    double max_deviation = 0;
    bool equal = false;
};
SlidingCompare compare_sliding_jets(const SlidingSet& s1, const SlidingSet& s2, int order,
                                    double tol);

struct FibrationCombination {
    OneForm combined;
    std::vector<Cplx> coefficients;
    int draws = 0;
    FibrationPullback certificate;
    std::vector<std::string> notes;
};

// Lemma-1-style combination: draw rational coefficients (seeded) until the
// combined form stays transverse at all marked points; candidates must share
// the divisor multiplicities.
FibrationCombination combine_fibrations(const std::vector<OneForm>& candidates,
                                        const Reduction& red, const Config& cfg);

struct MembershipCertificate {
    bool member = false;
    std::vector<double> dulac_residuals; // per corner
    std::vector<int> tangency_orders;    // per active singular point
    std::vector<std::string> failures;
};

// Same-family test: equal Dulac maps at every corner and tangent invariant
// curves at every singularity of the strict transform.
MembershipCertificate family_membership(const OneForm& wL, const OneForm& wL0,
                                        const Reduction& red, int order, const Config& cfg);

} // namespace folab
