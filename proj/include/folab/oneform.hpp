#pragma once

#include <utility>

#include "folab/series.hpp"

namespace folab {

// Parametrized germ of a curve through the origin of a chart:
// s -> (x(s), y(s)), x(0) = y(0) = 0, (x'(0), y'(0)) != 0.
struct CurveGerm {
    TruncSeries1 cx;
    TruncSeries1 cy;

    static CurveGerm axis_x(int order); // s -> (s, 0)
    static CurveGerm axis_y(int order); // s -> (0, s)
    // graph y = t(x), parametrized by x
    static CurveGerm graph_over_x(const TruncSeries1& t);
    // graph x = t(y), parametrized by y
    static CurveGerm graph_over_y(const TruncSeries1& t);

    std::pair<Cplx, Cplx> point(Cplx s) const { return {cx.eval(s), cy.eval(s)}; }
    std::pair<Cplx, Cplx> velocity(Cplx s) const;
    std::pair<Cplx, Cplx> tangent_at_zero() const { return {cx.at(1), cy.at(1)}; }
    CurveGerm swap_xy() const { return {cy, cx}; }
};

// omega = a dx + b dy
struct OneForm {
    TruncSeries2 a;
    TruncSeries2 b;
    bool is_polynomial = true;

    OneForm() = default;
    OneForm(TruncSeries2 a_, TruncSeries2 b_, bool poly = true);

    int order() const { return std::max(a.order(), b.order()); }
    // order-homogenized copy (a and b at the same truncation order)
    OneForm with_order(int n) const { return OneForm(a.with_order(n), b.with_order(n), is_polynomial); }
    OneForm swap_xy() const; // exchange x and y (a and b swap and compose)
    OneForm translate(Cplx px, Cplx py) const;
    OneForm scale(Cplx s) const { return OneForm(a.scale(s), b.scale(s), is_polynomial); }

    // common valuation of (a, b)
    int valuation(double eps) const;
    bool is_zero(double eps) const { return valuation(eps) == kValInfinity; }

    // exterior differential of a function: d(f) = f_x dx + f_y dy
    static OneForm differential(const TruncSeries2& f, bool poly = true);

    // dual vector field X = b d/dx - a d/dy evaluated/linearized by callers
    // linear part of X at the origin: [bx by; -ax -ay]
    struct LinearPart {
        Cplx m00, m01, m10, m11; // rows: d/dx, d/dy components
        std::pair<Cplx, Cplx> eigenvalues() const;
    };
    LinearPart linear_part() const;

    // leaf direction at a regular point: tangent (dx, dy) with a dx + b dy = 0
    std::pair<Cplx, Cplx> leaf_direction(Cplx x, Cplx y, double eps) const;
};

OneForm operator+(const OneForm& u, const OneForm& v);
OneForm operator-(const OneForm& u, const OneForm& v);

// Jet map of (C^2,0): (Phi1, Phi2), zero constant terms, invertible linear part.
struct JetMap2 {
    TruncSeries2 f1;
    TruncSeries2 f2;

    JetMap2() = default;
    JetMap2(TruncSeries2 f1_, TruncSeries2 f2_, double eps = 1e-10);

    static JetMap2 identity(int order);
    int order() const { return std::min(f1.order(), f2.order()); }
    Cplx jacobian_det0() const;
    std::pair<Cplx, Cplx> eval(Cplx x, Cplx y) const { return {f1.eval(x, y), f2.eval(x, y)}; }
};

// composition a(b(.)), truncated at min order
JetMap2 compose22(const JetMap2& a, const JetMap2& b, double eps);
// compositional inverse by jet Newton iteration
JetMap2 invert_map(const JetMap2& m, double eps);
// pullback Phi^* omega = (a o Phi) dPhi1 + (b o Phi) dPhi2
OneForm pullback(const JetMap2& phi, const OneForm& w, double eps);
// pushforward Phi_* omega = (Phi^{-1})^* omega
OneForm pushforward(const JetMap2& phi, const OneForm& w, double eps);

} // namespace folab
