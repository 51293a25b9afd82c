#include "folab/blowup.hpp"

#include <cmath>

namespace folab {

std::pair<Cplx, Cplx> Chart::to_base(Cplx u, Cplx v) const {
    Cplx x = u, y = v;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        if (it->branch == BranchKind::XChart) {
            y = x * y;
        } else {
            x = x * y;
        }
        x += it->cx;
        y += it->cy;
    }
    return {x, y};
}

TruncSeries2 Chart::pull_function(const TruncSeries2& f) const {
    TruncSeries2 g = f;
    for (const BlowupStep& s : steps) {
        g = g.translate(s.cx, s.cy);
        g = (s.branch == BranchKind::XChart) ? subst_xchart(g) : subst_ychart(g);
    }
    return g;
}

Chart Chart::extended(const BlowupStep& s, int new_id) const {
    Chart c = *this;
    c.steps.push_back(s);
    c.id = new_id;
    return c;
}

TruncSeries2 subst_xchart(const TruncSeries2& f) {
    int n = f.order();
    TruncSeries2 g(2 * n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            Cplx c = f.at(i, j);
            if (c != Cplx(0)) g.set(i + j, j, g.at(i + j, j) + c);
        }
    return g;
}

TruncSeries2 subst_ychart(const TruncSeries2& f) {
    int n = f.order();
    TruncSeries2 g(2 * n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            Cplx c = f.at(i, j);
            if (c != Cplx(0)) g.set(i, i + j, g.at(i, i + j) + c);
        }
    return g;
}

namespace {

// total pullback of a 1-form under one blow-up branch (no translation)
OneForm pull_form(const OneForm& w, BranchKind kind) {
    if (kind == BranchKind::XChart) {
        // x = u, y = u v: dy = v du + u dv
        TruncSeries2 as = subst_xchart(w.a), bs = subst_xchart(w.b);
        int n = as.order() + 1;
        TruncSeries2 A = as.with_order(n) + bs.shift(0, 1).with_order(n);
        TruncSeries2 B = bs.shift(1, 0).with_order(n);
        return OneForm(A, B, w.is_polynomial);
    }
    // x = u v, y = v: dx = v du + u dv
    TruncSeries2 as = subst_ychart(w.a), bs = subst_ychart(w.b);
    int n = as.order() + 1;
    TruncSeries2 A = as.shift(0, 1).with_order(n);
    TruncSeries2 B = as.shift(1, 0).with_order(n) + bs.with_order(n);
    return OneForm(A, B, w.is_polynomial);
}

int divisor_multiplicity(const OneForm& w, BranchKind kind, double eps) {
    int ma, mb;
    if (kind == BranchKind::XChart) {
        ma = w.a.x_multiplicity(eps);
        mb = w.b.x_multiplicity(eps);
    } else {
        ma = w.a.y_multiplicity(eps);
        mb = w.b.y_multiplicity(eps);
    }
    return std::min(ma, mb);
}

OneForm divide_divisor_power(const OneForm& w, BranchKind kind, int m, double eps) {
    if (kind == BranchKind::XChart)
        return OneForm(w.a.unshift_x(m, eps), w.b.unshift_x(m, eps), w.is_polynomial);
    return OneForm(w.a.unshift_y(m, eps), w.b.unshift_y(m, eps), w.is_polynomial);
}

} // namespace

std::pair<PulledBackForm, PulledBackForm> blow_up_point(const OneForm& w, Cplx cx, Cplx cy,
                                                        double eps, const Chart& parent) {
    if (w.is_zero(eps)) throw std::invalid_argument("blow_up_point: zero form");
    OneForm centered = (cx == Cplx(0) && cy == Cplx(0)) ? w : w.translate(cx, cy);

    PulledBackForm px, py;
    px.kind = BranchKind::XChart;
    py.kind = BranchKind::YChart;
    px.chart = parent.extended(BlowupStep{cx, cy, BranchKind::XChart}, -1);
    py.chart = parent.extended(BlowupStep{cx, cy, BranchKind::YChart}, -1);
    px.total = pull_form(centered, BranchKind::XChart);
    py.total = pull_form(centered, BranchKind::YChart);
    px.m = divisor_multiplicity(px.total, BranchKind::XChart, eps);
    py.m = divisor_multiplicity(py.total, BranchKind::YChart, eps);
    if (px.m != py.m)
        throw std::logic_error("blow_up_point: multiplicity disagrees between charts");
    px.strict_f = divide_divisor_power(px.total, BranchKind::XChart, px.m, eps);
    py.strict_f = divide_divisor_power(py.total, BranchKind::YChart, py.m, eps);

    if (!w.is_polynomial) {
        // jets: only coefficients of total degree <= input order are trusted
        int n = w.order();
        px.total = px.total.with_order(n + 1);
        py.total = py.total.with_order(n + 1);
        px.strict_f = px.strict_f.with_order(n + 1 - px.m > 0 ? n + 1 - px.m : 1);
        py.strict_f = py.strict_f.with_order(n + 1 - py.m > 0 ? n + 1 - py.m : 1);
    }
    return {px, py};
}

TruncSeries1 PulledBackForm::normal_coeff_on_divisor() const {
    const TruncSeries2& f = (kind == BranchKind::XChart) ? strict_f.a : strict_f.b;
    int n = f.order();
    TruncSeries1 r(n);
    for (int j = 0; j <= n; ++j)
        r.set(j, (kind == BranchKind::XChart) ? f.at(0, j) : f.at(j, 0));
    return r;
}

TruncSeries1 PulledBackForm::tangent_coeff_on_divisor() const {
    const TruncSeries2& f = (kind == BranchKind::XChart) ? strict_f.b : strict_f.a;
    int n = f.order();
    TruncSeries1 r(n);
    for (int j = 0; j <= n; ++j)
        r.set(j, (kind == BranchKind::XChart) ? f.at(0, j) : f.at(j, 0));
    return r;
}

bool is_divisor_invariant(const PulledBackForm& p, double eps) {
    double scale = std::max(p.strict_f.a.max_abs(), p.strict_f.b.max_abs());
    return p.tangent_coeff_on_divisor().max_abs() <= eps * std::max(1.0, scale);
}

std::vector<DivisorZero> singular_points_on_divisor(const PulledBackForm& p, double eps) {
    bool invariant = is_divisor_invariant(p, eps);
    TruncSeries1 key = invariant ? p.normal_coeff_on_divisor() : p.tangent_coeff_on_divisor();
    TruncSeries1 other = invariant ? p.tangent_coeff_on_divisor() : p.normal_coeff_on_divisor();
    std::vector<DivisorZero> out;
    if (key.max_abs() == 0) return out; // no isolated zeros in this chart
    std::vector<ClusteredRoot> roots = clustered_roots(key.coeffs(), eps);
    double oscale = std::max(1.0, other.max_abs());
    for (const ClusteredRoot& r : roots) {
        bool singular = invariant || std::abs(other.eval(r.value)) <= 1e3 * eps * oscale;
        out.push_back(DivisorZero{r, singular});
    }
    return out;
}

PulledBackCurve pull_back_curve(const TruncSeries2& f, Cplx cx, Cplx cy, BranchKind kind,
                                double eps) {
    TruncSeries2 g = f.translate(cx, cy);
    g = (kind == BranchKind::XChart) ? subst_xchart(g) : subst_ychart(g);
    PulledBackCurve out;
    out.total = g;
    out.m = (kind == BranchKind::XChart) ? g.x_multiplicity(eps) : g.y_multiplicity(eps);
    if (out.m > g.order()) out.m = g.order(); // zero series guard
    out.strict_f = (kind == BranchKind::XChart) ? g.unshift_x(out.m, eps) : g.unshift_y(out.m, eps);
    return out;
}

} // namespace folab
