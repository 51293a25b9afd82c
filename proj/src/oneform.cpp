#include "folab/oneform.hpp"

#include <cmath>

namespace folab {

CurveGerm CurveGerm::axis_x(int order) {
    return {TruncSeries1::identity(order), TruncSeries1::zero(order)};
}

CurveGerm CurveGerm::axis_y(int order) {
    return {TruncSeries1::zero(order), TruncSeries1::identity(order)};
}

CurveGerm CurveGerm::graph_over_x(const TruncSeries1& t) {
    return {TruncSeries1::identity(t.order()), t};
}

CurveGerm CurveGerm::graph_over_y(const TruncSeries1& t) {
    return {t, TruncSeries1::identity(t.order())};
}

std::pair<Cplx, Cplx> CurveGerm::velocity(Cplx s) const {
    return {cx.derivative().eval(s), cy.derivative().eval(s)};
}

OneForm::OneForm(TruncSeries2 a_, TruncSeries2 b_, bool poly)
    : a(std::move(a_)), b(std::move(b_)), is_polynomial(poly) {
    if (a.order() != b.order()) {
        int n = std::max(a.order(), b.order());
        a = a.with_order(n);
        b = b.with_order(n);
    }
}

OneForm OneForm::swap_xy() const {
    // under (x,y) -> (y,x): a dx + b dy becomes (b o swap) dx + (a o swap) dy
    return OneForm(b.swap_xy(), a.swap_xy(), is_polynomial);
}

OneForm OneForm::translate(Cplx px, Cplx py) const {
    return OneForm(a.translate(px, py), b.translate(px, py), is_polynomial);
}

int OneForm::valuation(double eps) const {
    return std::min(a.valuation(eps), b.valuation(eps));
}

OneForm OneForm::differential(const TruncSeries2& f, bool poly) {
    return OneForm(f.dx(), f.dy(), poly);
}

std::pair<Cplx, Cplx> OneForm::LinearPart::eigenvalues() const {
    Cplx tr = m00 + m11;
    Cplx det = m00 * m11 - m01 * m10;
    Cplx disc = std::sqrt(tr * tr - Cplx(4) * det);
    Cplx l1 = (tr + disc) / Cplx(2);
    Cplx l2 = (tr - disc) / Cplx(2);
    return {l1, l2};
}

OneForm::LinearPart OneForm::linear_part() const {
    LinearPart lp;
    lp.m00 = b.at(1, 0);
    lp.m01 = b.at(0, 1);
    lp.m10 = -a.at(1, 0);
    lp.m11 = -a.at(0, 1);
    return lp;
}

std::pair<Cplx, Cplx> OneForm::leaf_direction(Cplx x, Cplx y, double eps) const {
    Cplx av = a.eval(x, y), bv = b.eval(x, y);
    double n = std::abs(av) + std::abs(bv);
    if (n <= eps) throw std::domain_error("leaf_direction: singular point of the form");
    return {bv, -av};
}

OneForm operator+(const OneForm& u, const OneForm& v) {
    int n = std::max(u.order(), v.order());
    return OneForm(u.a.with_order(n) + v.a.with_order(n), u.b.with_order(n) + v.b.with_order(n),
                   u.is_polynomial && v.is_polynomial);
}

OneForm operator-(const OneForm& u, const OneForm& v) {
    int n = std::max(u.order(), v.order());
    return OneForm(u.a.with_order(n) - v.a.with_order(n), u.b.with_order(n) - v.b.with_order(n),
                   u.is_polynomial && v.is_polynomial);
}

JetMap2::JetMap2(TruncSeries2 f1_, TruncSeries2 f2_, double eps)
    : f1(std::move(f1_)), f2(std::move(f2_)) {
    if (std::abs(f1.at(0, 0)) > eps || std::abs(f2.at(0, 0)) > eps)
        throw std::invalid_argument("JetMap2: components must vanish at the origin");
    f1.set(0, 0, Cplx(0));
    f2.set(0, 0, Cplx(0));
    if (std::abs(jacobian_det0()) <= eps)
        throw DegenerateJet("JetMap2: singular linear part");
}

JetMap2 JetMap2::identity(int order) {
    return JetMap2(TruncSeries2::var_x(order), TruncSeries2::var_y(order));
}

Cplx JetMap2::jacobian_det0() const {
    return f1.at(1, 0) * f2.at(0, 1) - f1.at(0, 1) * f2.at(1, 0);
}

JetMap2 compose22(const JetMap2& a, const JetMap2& b, double eps) {
    int n = std::min(a.order(), b.order());
    return JetMap2(compose2(a.f1.with_order(n), b.f1.with_order(n), b.f2.with_order(n), eps),
                   compose2(a.f2.with_order(n), b.f1.with_order(n), b.f2.with_order(n), eps), eps);
}

JetMap2 invert_map(const JetMap2& m, double eps) {
    int n = m.order();
    // inverse of the linear part
    Cplx a11 = m.f1.at(1, 0), a12 = m.f1.at(0, 1), a21 = m.f2.at(1, 0), a22 = m.f2.at(0, 1);
    Cplx det = a11 * a22 - a12 * a21;
    TruncSeries2 g1(n), g2(n);
    g1.set(1, 0, a22 / det);
    g1.set(0, 1, -a12 / det);
    g2.set(1, 0, -a21 / det);
    g2.set(0, 1, a11 / det);
    JetMap2 inv(g1, g2, eps);
    for (int it = 0; it < n + 2; ++it) {
        JetMap2 err = compose22(m, inv, eps); // should be identity
        TruncSeries2 e1 = err.f1 - TruncSeries2::var_x(n);
        TruncSeries2 e2 = err.f2 - TruncSeries2::var_y(n);
        if (std::max(e1.max_abs(), e2.max_abs()) < 1e-15) break;
        // Newton correction through the inverse linear part
        TruncSeries2 d1 = e1.scale(a22 / det) - e2.scale(a12 / det);
        TruncSeries2 d2 = e2.scale(a11 / det) - e1.scale(a21 / det);
        inv = JetMap2(inv.f1 - d1, inv.f2 - d2, eps);
    }
    return inv;
}

OneForm pullback(const JetMap2& phi, const OneForm& w, double eps) {
    int n = std::min(phi.order(), w.order());
    TruncSeries2 ac = compose2(w.a.with_order(n), phi.f1.with_order(n), phi.f2.with_order(n), eps);
    TruncSeries2 bc = compose2(w.b.with_order(n), phi.f1.with_order(n), phi.f2.with_order(n), eps);
    int nd = n - 1; // derivative accuracy
    TruncSeries2 na = ac.with_order(nd) * phi.f1.dx().with_order(nd) +
                      bc.with_order(nd) * phi.f2.dx().with_order(nd);
    TruncSeries2 nb = ac.with_order(nd) * phi.f1.dy().with_order(nd) +
                      bc.with_order(nd) * phi.f2.dy().with_order(nd);
    return OneForm(na, nb, false);
}

OneForm pushforward(const JetMap2& phi, const OneForm& w, double eps) {
    return pullback(invert_map(phi, eps), w, eps);
}

} // namespace folab
