#pragma once

#include <functional>

#include "folab/oneform.hpp"

namespace folab {

// Parametrized path in one complex coordinate.
struct Path {
    std::function<Cplx(double)> pos; // t in [0, 1]
    std::function<Cplx(double)> vel; // d pos / dt

    static Path segment(Cplx from, Cplx to);
    // circle through `base` around `center`, `turns` full positive turns
    // (negative for clockwise)
    static Path circle(Cplx center, Cplx base, double turns);
};

struct OdeResult {
    Cplx y;
    double err_estimate; // accumulated local error estimates
    int steps;
    int rejected;
};

// Adaptive Fehlberg 7(8) for a scalar complex ODE y' = f(t, y), t in [0,1].
// Throws StepCollapse when the step size underflows or `escape` reports the
// solution out of bounds; ToleranceNotMet if the error budget is exceeded.
OdeResult integrate_ode(const std::function<Cplx(double, Cplx)>& f, Cplx y0, double tol,
                        const std::function<bool(Cplx)>& escape = nullptr);

// Leaf ODE for omega = a du + b dv in adapted coordinates ({v=0} invariant or
// the path staying inside a regular tube): lifts `path` (in u) starting at
// v = v0, solving dv/dt = -(a/b)(u(t), v) * u'(t).
OdeResult lift_path(const OneForm& w, const Path& path, Cplx v0, double tol,
                    double tube_radius = 1.0);

} // namespace folab
