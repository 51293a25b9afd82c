#pragma once

#include <utility>
#include <vector>

#include "folab/numutil.hpp"
#include "folab/oneform.hpp"

namespace folab {

// Chart branch of a quadratic blow-up.
//   XChart: (u, v) -> (u, u*v), exceptional divisor {u = 0}, parametrized by v
//   YChart: (u, v) -> (u*v, v), exceptional divisor {v = 0}, parametrized by u
enum class BranchKind { XChart, YChart };

struct BlowupStep {
    Cplx cx{0}, cy{0}; // blow-up center in the previous chart's coordinates
    BranchKind branch = BranchKind::XChart;
};

// Substitution history from the base (C^2,0) down to a chart. Each step is
// exact on polynomial coefficients.
struct Chart {
    int id = -1;
    std::vector<BlowupStep> steps;

    std::pair<Cplx, Cplx> to_base(Cplx u, Cplx v) const;
    // substitute the chart map into a function on the base (exact; order grows)
    TruncSeries2 pull_function(const TruncSeries2& f) const;
    Chart extended(const BlowupStep& s, int new_id) const;
};

// x^i y^j -> u^(i+j) v^j   (y = u v)
TruncSeries2 subst_xchart(const TruncSeries2& f);
// x^i y^j -> u^i v^(i+j)   (x = u v)
TruncSeries2 subst_ychart(const TruncSeries2& f);

struct PulledBackForm {
    Chart chart;
    BranchKind kind = BranchKind::XChart;
    OneForm total;    // pullback in chart coordinates
    int m = 0;        // divisor multiplicity: largest power of the divisor coordinate
    OneForm strict_f; // total divided by (divisor coordinate)^m

    // coefficient of the normal differential restricted to the divisor,
    // as a polynomial in the divisor parameter
    TruncSeries1 normal_coeff_on_divisor() const;
    // coefficient of the tangent differential restricted to the divisor
    TruncSeries1 tangent_coeff_on_divisor() const;
};

// One quadratic blow-up of omega at `center` (coordinates of the current
// germ). Both charts are returned; multiplicities agree by construction and
// are asserted equal.
std::pair<PulledBackForm, PulledBackForm> blow_up_point(const OneForm& w, Cplx cx, Cplx cy,
                                                        double eps, const Chart& parent = Chart{});

// True iff the exceptional divisor is an integral curve of the strict
// transform: the tangent-differential coefficient vanishes identically on
// the divisor (relative tolerance).
bool is_divisor_invariant(const PulledBackForm& p, double eps);

struct DivisorZero {
    ClusteredRoot root;
    bool singular; // both coefficients vanish (else: tangency point only)
};

// Zeros of the restricted coefficient system on the divisor, within this
// chart. On an invariant divisor these are the singular points of the strict
// transform; on a dicritical one, the tangency points (flagged singular when
// the full form vanishes too).
std::vector<DivisorZero> singular_points_on_divisor(const PulledBackForm& p, double eps);

// Curve pullback: multiplicity of f o sigma along the divisor and the strict
// transform of {f = 0} in the chart.
struct PulledBackCurve {
    TruncSeries2 total;
    int m = 0;
    TruncSeries2 strict_f;
};
PulledBackCurve pull_back_curve(const TruncSeries2& f, Cplx cx, Cplx cy, BranchKind kind,
                                double eps);

} // namespace folab
