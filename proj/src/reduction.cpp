#include "folab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/Dense>

namespace folab {

std::string to_string(SingType t) {
    switch (t) {
        case SingType::Regular: return "regular";
        case SingType::ReducedNondegenerate: return "reduced-nondegenerate";
        case SingType::SaddleNode: return "saddle-node";
        case SingType::NonReduced: return "non-reduced";
        case SingType::DicriticalTangency: return "dicritical-tangency";
    }
    return "?";
}

Classification classify_germ(const OneForm& w, const Config& cfg) {
    Classification c;
    double scale = std::max(w.a.max_abs(), w.b.max_abs());
    if (scale == 0) throw std::invalid_argument("classify_germ: zero form");
    double floor = cfg.eps_zero * scale;

    if (std::abs(w.a.at(0, 0)) > floor || std::abs(w.b.at(0, 0)) > floor) {
        c.type = SingType::Regular;
        return c;
    }
    auto lp = w.linear_part();
    double lscale = std::max({std::abs(lp.m00), std::abs(lp.m01), std::abs(lp.m10),
                              std::abs(lp.m11)});
    if (lscale <= floor) {
        c.type = SingType::NonReduced; // zero linear part
        return c;
    }
    Cplx tr = lp.m00 + lp.m11;
    Cplx det = lp.m00 * lp.m11 - lp.m01 * lp.m10;
    auto [m1, m2] = lp.eigenvalues();
    if (std::abs(m1) < std::abs(m2)) std::swap(m1, m2); // |m1| >= |m2|
    c.mu1 = m1;
    c.mu2 = m2;
    if (std::abs(m1) <= cfg.eps_zero * lscale) {
        c.type = SingType::NonReduced; // nilpotent
        return c;
    }
    // det/tr is a stable proxy for the small eigenvalue
    if (std::abs(det) <= cfg.eps_zero * lscale * lscale) {
        c.type = std::abs(tr) > cfg.eps_zero * lscale ? SingType::SaddleNode
                                                      : SingType::NonReduced;
        return c;
    }
    Cplx ratio = m2 / m1;
    // non-reduced iff the vector-field eigenvalue ratio is a positive rational
    // (the 1-form condition lambda2/lambda1 in Q_{<0}, plus the resonant
    // equal-eigenvalue case)
    if (ratio.real() > 0 && std::abs(ratio.imag()) < 1e-9 &&
        is_rational(ratio, cfg.q_max, 1e-9)) {
        c.type = SingType::NonReduced;
        return c;
    }
    c.type = SingType::ReducedNondegenerate;
    return c;
}

namespace {

struct WorkItem {
    int parent_chart;
    Cplx cu, cv;
    std::vector<int> comps_through;
    int consumed_point; // -1 for the base blow-up
};

// linear data of an adapted germ (owning branch {v=0} invariant):
// a = alpha*v + ..., b = beta*u + gamma*v + ...
struct AdaptedLin {
    Cplx alpha, beta, gamma;
};

AdaptedLin adapted_linear(const OneForm& g) {
    return {g.a.at(0, 1), g.b.at(1, 0), g.b.at(0, 1)};
}

OneForm normalized(const OneForm& w) {
    double m = std::max(w.a.max_abs(), w.b.max_abs());
    if (m == 0) return w;
    return w.scale(Cplx(1.0 / m));
}

void fill_point_indices(SingularPoint& p, const Config& cfg) {
    AdaptedLin lin = adapted_linear(p.germ_i);
    p.lin_alpha = lin.alpha;
    p.lin_beta = lin.beta;
    p.lin_gamma = lin.gamma;
    if (p.type != SingType::ReducedNondegenerate && p.type != SingType::SaddleNode) return;
    double floor = cfg.eps_zero;
    // CS index along the owning branch {v=0}: mu_trans / mu_along = -alpha/beta
    if (std::abs(lin.beta) > floor) p.cs[p.comp_i] = -lin.alpha / lin.beta;
    if (p.is_corner) {
        if (std::abs(lin.alpha) > floor) p.cs[p.comp_j] = -lin.beta / lin.alpha;
        p.sep_direction = {Cplx(0), Cplx(1)};
    } else {
        if (std::abs(lin.alpha) > floor) p.cs_sep = -lin.beta / lin.alpha;
        // second eigendirection of [[beta, gamma], [0, -alpha]]
        Cplx d1 = -lin.gamma, d2 = lin.alpha + lin.beta;
        if (std::abs(d1) + std::abs(d2) <= floor) {
            d1 = 0;
            d2 = 1;
        }
        double n = std::sqrt(std::norm(d1) + std::norm(d2));
        p.sep_direction = {d1 / n, d2 / n};
    }
}

} // namespace

std::vector<int> DivisorGraph::active_points() const {
    std::vector<int> out;
    for (const SingularPoint& p : points)
        if (!p.consumed) out.push_back(p.id);
    return out;
}

OneForm adapted_germ_at(const ReductionTree& tree, const SingularPoint& p, double eps) {
    const ChartRecord& cr = tree.charts.at(static_cast<std::size_t>(p.chart_id));
    bool axis_x_owner = cr.comp_x && *cr.comp_x == p.comp_i;
    OneForm g = axis_x_owner ? cr.strict_F.translate(Cplx(0), p.coord).swap_xy()
                             : cr.strict_F.translate(p.coord, Cplx(0));
    (void)eps;
    return normalized(g);
}

Reduction desingularize(const OneForm& w, const Config& cfg) {
    if (w.is_zero(cfg.eps_zero)) throw std::invalid_argument("desingularize: zero form");

    // non-isolated singularity heuristic: common coordinate factor or
    // identically vanishing resultants
    {
        double eps = cfg.eps_zero;
        bool a_zero = w.a.is_zero(eps), b_zero = w.b.is_zero(eps);
        if (a_zero || b_zero) {
            const TruncSeries2& nz = a_zero ? w.b : w.a;
            if (nz.valuation(eps) > 0)
                throw NonIsolatedSingularity("one coefficient vanishes, the other is not a unit");
        } else {
            if ((w.a.x_multiplicity(eps) >= 1 && w.b.x_multiplicity(eps) >= 1) ||
                (w.a.y_multiplicity(eps) >= 1 && w.b.y_multiplicity(eps) >= 1))
                throw NonIsolatedSingularity("coordinate axis divides both coefficients");
            if (w.valuation(eps) > 0) {
                TruncSeries1 ry = resultant_y(w.a, w.b, eps);
                if (ry.valuation(eps) == kValInfinity) {
                    TruncSeries1 rx = resultant_y(w.a.swap_xy(), w.b.swap_xy(), eps);
                    if (rx.valuation(eps) == kValInfinity)
                        throw NonIsolatedSingularity("resultant of coefficients vanishes identically");
                }
            }
        }
    }

    Reduction red;
    red.origin_class = classify_germ(w, cfg);
    ChartRecord base;
    base.id = 0;
    base.chart.id = 0;
    base.strict_F = w;
    red.tree.charts.push_back(base);

    if (red.origin_class.type == SingType::Regular)
        throw std::invalid_argument("desingularize: the form is regular at the origin");
    if (red.origin_class.type != SingType::NonReduced) {
        red.already_reduced = true;
        return red;
    }

    DivisorGraph& g = red.graph;
    ReductionTree& tree = red.tree;
    std::deque<WorkItem> work;
    work.push_back(WorkItem{0, Cplx(0), Cplx(0), {}, -1});

    while (!work.empty()) {
        WorkItem item = work.front();
        work.pop_front();
        ChartRecord& parent = tree.charts[static_cast<std::size_t>(item.parent_chart)];
        int depth = static_cast<int>(parent.chart.steps.size()) + 1;
        if (depth > cfg.max_depth)
            throw MaxDepthExceeded("blow-up depth exceeded max_depth = " +
                                   std::to_string(cfg.max_depth));
        tree.depth = std::max(tree.depth, depth);

        auto [px, py] = blow_up_point(parent.strict_F, item.cu, item.cv, cfg.eps_zero, parent.chart);

        ReductionNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.parent_chart = item.parent_chart;
        node.center_u = item.cu;
        node.center_v = item.cv;
        node.comps_through_center = item.comps_through;
        node.consumed_point = item.consumed_point;
        node.step_multiplicity = px.m;
        if (item.consumed_point >= 0) g.points[static_cast<std::size_t>(item.consumed_point)].consumed = true;

        // new component
        DivisorComponent comp;
        comp.id = static_cast<int>(g.components.size());
        comp.self_intersection = -1;
        comp.multiplicity = px.m;
        for (int cid : item.comps_through) {
            comp.multiplicity += g.components[static_cast<std::size_t>(cid)].multiplicity;
            g.components[static_cast<std::size_t>(cid)].self_intersection -= 1;
        }
        node.comp_created = comp.id;

        // charts
        ChartRecord cx, cy;
        cx.id = static_cast<int>(tree.charts.size());
        cy.id = cx.id + 1;
        cx.node = cy.node = node.id;
        cx.chart = px.chart;
        cx.chart.id = cx.id;
        cy.chart = py.chart;
        cy.chart.id = cy.id;
        cx.strict_F = px.strict_f;
        cy.strict_F = py.strict_f;
        cx.comp_x = comp.id;
        cy.comp_y = comp.id;
        comp.chart_axes.push_back({cx.id, BranchKind::XChart});
        comp.chart_axes.push_back({cy.id, BranchKind::YChart});

        // components через the center continue into the new charts
        std::optional<int> old_on_x, old_on_y; // parent's axis components through the center
        if (parent.comp_x && std::abs(item.cu) == 0.0) old_on_x = parent.comp_x;
        if (parent.comp_y && std::abs(item.cv) == 0.0) old_on_y = parent.comp_y;
        if (old_on_y) {
            cx.comp_y = old_on_y; // case: old {y=0} continues as {v=0} in the x-branch chart
            g.components[static_cast<std::size_t>(*old_on_y)].chart_axes.push_back(
                {cx.id, BranchKind::YChart});
        }
        if (old_on_x) {
            cy.comp_x = old_on_x; // old {x=0} continues as {u=0} in the y-branch chart
            g.components[static_cast<std::size_t>(*old_on_x)].chart_axes.push_back(
                {cy.id, BranchKind::XChart});
        }
        node.chart_x = cx.id;
        node.chart_y = cy.id;

        // dicriticality of the new component
        bool invariant = is_divisor_invariant(px, cfg.eps_zero) &&
                         is_divisor_invariant(py, cfg.eps_zero);
        comp.is_dicritical = !invariant;

        // drop the separated corner if the center was one
        if (old_on_x && old_on_y) {
            auto it = std::remove_if(g.corners.begin(), g.corners.end(), [&](const Corner& c) {
                return (c.comp_a == *old_on_x && c.comp_b == *old_on_y) ||
                       (c.comp_a == *old_on_y && c.comp_b == *old_on_x);
            });
            g.corners.erase(it, g.corners.end());
        }

        // collect zeros on the new component from both charts
        struct Found {
            Cplx coord;
            bool exact;
            double residual;
            bool from_x_chart;
            bool singular;
        };
        std::vector<Found> found;
        for (const DivisorZero& z : singular_points_on_divisor(px, cfg.eps_zero))
            if (std::abs(z.root.value) <= 1.0 + 1e-8)
                found.push_back({z.root.value, z.root.exact, z.root.residual, true, z.singular});
        for (const DivisorZero& z : singular_points_on_divisor(py, cfg.eps_zero))
            if (std::abs(z.root.value) < 1.0 - 1e-8)
                found.push_back({z.root.value, z.root.exact, z.root.residual, false, z.singular});
        std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
            if (a.from_x_chart != b.from_x_chart) return a.from_x_chart;
            if (a.coord.real() != b.coord.real()) return a.coord.real() < b.coord.real();
            return a.coord.imag() < b.coord.imag();
        });

        tree.nodes.push_back(node);
        tree.charts.push_back(cx);
        tree.charts.push_back(cy);
        g.components.push_back(comp);
        DivisorComponent& comp_ref = g.components.back();

        for (const Found& f : found) {
            SingularPoint p;
            p.id = static_cast<int>(g.points.size());
            p.chart_id = f.from_x_chart ? cx.id : cy.id;
            p.coord = f.coord;
            p.exact = f.exact;
            p.residual = f.residual;
            p.comp_i = comp_ref.id;

            const ChartRecord& cr = tree.charts[static_cast<std::size_t>(p.chart_id)];
            // corner detection: zero coordinate on the other axis component
            bool corner = false;
            if (f.from_x_chart && cr.comp_y && std::abs(f.coord) <= 1e-12) corner = true;
            if (!f.from_x_chart && cr.comp_x && std::abs(f.coord) <= 1e-12) corner = true;
            if (corner) {
                p.is_corner = true;
                p.comp_j = f.from_x_chart ? *cr.comp_y : *cr.comp_x;
                p.coord = Cplx(0);
            }
            p.germ_i = adapted_germ_at(tree, p, cfg.eps_zero);
            if (!f.singular) {
                p.type = SingType::DicriticalTangency;
            } else {
                Classification cl = classify_germ(p.germ_i, cfg);
                p.type = cl.type;
            }
            fill_point_indices(p, cfg);

            comp_ref.points.push_back(p.id);
            if (p.is_corner) {
                g.components[static_cast<std::size_t>(p.comp_j)].points.push_back(p.id);
                for (Corner& c : g.corners)
                    if ((c.comp_a == p.comp_i && c.comp_b == p.comp_j) ||
                        (c.comp_a == p.comp_j && c.comp_b == p.comp_i))
                        c.point_id = p.id;
            }
            g.points.push_back(p);

            if (p.type == SingType::NonReduced || p.type == SingType::DicriticalTangency) {
                WorkItem next;
                next.parent_chart = p.chart_id;
                next.consumed_point = p.id;
                if (f.from_x_chart) {
                    next.cu = Cplx(0);
                    next.cv = f.coord;
                } else {
                    next.cu = f.coord;
                    next.cv = Cplx(0);
                }
                next.comps_through.push_back(p.comp_i);
                if (p.is_corner) next.comps_through.push_back(p.comp_j);
                work.push_back(next);
            }
        }

        // register the graph corners created by this blow-up
        if (old_on_y) {
            Corner c;
            c.comp_a = comp_ref.id;
            c.comp_b = *old_on_y;
            c.chart_id = cx.id;
            for (const SingularPoint& p : g.points)
                if (!p.consumed && p.is_corner && p.chart_id == cx.id) c.point_id = p.id;
            g.corners.push_back(c);
        }
        if (old_on_x) {
            Corner c;
            c.comp_a = comp_ref.id;
            c.comp_b = *old_on_x;
            c.chart_id = cy.id;
            for (const SingularPoint& p : g.points)
                if (!p.consumed && p.is_corner && p.chart_id == cy.id) c.point_id = p.id;
            g.corners.push_back(c);
        }
    }

    // dead branches
    for (DivisorComponent& c : g.components) {
        int live = 0, corner_live = 0;
        for (int pid : c.points) {
            const SingularPoint& p = g.points[static_cast<std::size_t>(pid)];
            if (p.consumed) continue;
            ++live;
            if (p.is_corner) ++corner_live;
        }
        c.is_dead_branch = !c.is_dicritical && live == 1 && corner_live == 1;
    }
    return red;
}

std::map<std::pair<int, int>, Cplx> camacho_sad_indices(const DivisorGraph& g) {
    std::map<std::pair<int, int>, Cplx> out;
    for (const SingularPoint& p : g.points) {
        if (p.consumed) continue;
        for (const auto& [comp, idx] : p.cs) out[{p.id, comp}] = idx;
        if (p.cs_sep) out[{p.id, -1}] = *p.cs_sep;
    }
    return out;
}

std::vector<IndexTheoremRow> verify_index_theorem(const DivisorGraph& g, double tol) {
    std::vector<IndexTheoremRow> rows;
    for (const DivisorComponent& c : g.components) {
        IndexTheoremRow row;
        row.component = c.id;
        row.self_intersection = c.self_intersection;
        if (c.is_dicritical) {
            row.skipped_dicritical = true;
            rows.push_back(row);
            continue;
        }
        Cplx sum(0);
        for (int pid : c.points) {
            const SingularPoint& p = g.points[static_cast<std::size_t>(pid)];
            if (p.consumed) continue;
            auto it = p.cs.find(c.id);
            if (it != p.cs.end()) sum += it->second;
        }
        row.index_sum = sum;
        row.deviation = std::abs(sum - Cplx(double(c.self_intersection)));
        row.pass = row.deviation < tol;
        rows.push_back(row);
    }
    return rows;
}

ClassMReport is_in_class_M(const DivisorGraph& g, const Config& cfg) {
    ClassMReport rep;
    rep.in_class = true;
    for (const DivisorComponent& c : g.components)
        if (c.is_dicritical) {
            rep.in_class = false;
            rep.reasons.push_back("component " + std::to_string(c.id) + " is dicritical");
        }
    for (const SingularPoint& p : g.points) {
        if (p.consumed) continue;
        if (p.type == SingType::SaddleNode) {
            rep.in_class = false;
            rep.reasons.push_back("point " + std::to_string(p.id) + " is a saddle-node");
        }
        for (const auto& [comp, idx] : p.cs) {
            if (is_rational(idx, cfg.q_max, 1e-9)) {
                rep.in_class = false;
                rep.reasons.push_back("index at point " + std::to_string(p.id) + " along component " +
                                      std::to_string(comp) + " is rational");
            }
        }
    }
    return rep;
}

namespace {

TruncSeries1 restrict_curve_to_divisor(const TruncSeries2& f, BranchKind kind) {
    int n = f.order();
    TruncSeries1 r(n);
    for (int j = 0; j <= n; ++j) r.set(j, kind == BranchKind::XChart ? f.at(0, j) : f.at(j, 0));
    return r;
}

int intersection_rec(const TruncSeries2& f, const TruncSeries2& g, const Config& cfg, int depth,
                     int max_depth) {
    double eps = cfg.eps_zero;
    int mf = f.valuation(eps), mg = g.valuation(eps);
    if (mf == kValInfinity || mg == kValInfinity)
        throw std::invalid_argument("intersection_number: zero curve");
    if (mf == 0 || mg == 0) return 0;
    if (depth > max_depth)
        throw MaxDepthExceeded("intersection_number: depth exceeded (non-coprime input?)");

    int acc = mf * mg;
    for (BranchKind kind : {BranchKind::XChart, BranchKind::YChart}) {
        PulledBackCurve pf = pull_back_curve(f, Cplx(0), Cplx(0), kind, eps);
        PulledBackCurve pg = pull_back_curve(g, Cplx(0), Cplx(0), kind, eps);
        TruncSeries1 rf = restrict_curve_to_divisor(pf.strict_f, kind);
        TruncSeries1 rg = restrict_curve_to_divisor(pg.strict_f, kind);
        if (rf.valuation(eps) == kValInfinity || rg.valuation(eps) == kValInfinity)
            throw MaxDepthExceeded("intersection_number: strict transform contains the divisor");
        double gs = std::max(1.0, rg.max_abs());
        for (const ClusteredRoot& r : clustered_roots(rf.coeffs(), eps)) {
            bool in_range = (kind == BranchKind::XChart) ? std::abs(r.value) <= 1.0 + 1e-8
                                                         : std::abs(r.value) < 1.0 - 1e-8;
            if (!in_range) continue;
            if (std::abs(rg.eval(r.value)) > 1e-6 * gs) continue;
            TruncSeries2 fl = (kind == BranchKind::XChart) ? pf.strict_f.translate(Cplx(0), r.value)
                                                           : pf.strict_f.translate(r.value, Cplx(0));
            TruncSeries2 gl = (kind == BranchKind::XChart) ? pg.strict_f.translate(Cplx(0), r.value)
                                                           : pg.strict_f.translate(r.value, Cplx(0));
            acc += intersection_rec(fl, gl, cfg, depth + 1, max_depth);
        }
    }
    return acc;
}

} // namespace

IntersectionNumber intersection_number(const TruncSeries2& f, const TruncSeries2& g,
                                       const Config& cfg, int max_depth) {
    {
        TruncSeries1 res = resultant_y(f, g, cfg.eps_zero);
        TruncSeries1 resx = resultant_y(f.swap_xy(), g.swap_xy(), cfg.eps_zero);
        if (res.valuation(cfg.eps_zero) == kValInfinity &&
            resx.valuation(cfg.eps_zero) == kValInfinity)
            throw std::invalid_argument("intersection_number: curves share a component");
    }
    IntersectionNumber out;
    out.value = intersection_rec(f, g, cfg, 0, max_depth);
    out.bound_note = "M(f,g) <= I(f,g) = " + std::to_string(out.value) +
                     " (smallest M with (x,y)^M contained in (f,g) is bounded by I)";
    return out;
}

TruncSeries1 resultant_y(const TruncSeries2& f, const TruncSeries2& g, double eps) {
    // degrees in y, trimmed at relative tolerance
    auto ydeg = [&](const TruncSeries2& s) {
        double floor = eps * std::max(1.0, s.max_abs());
        int d = -1;
        for (int i = 0; i <= s.order(); ++i)
            for (int j = 0; i + j <= s.order(); ++j)
                if (std::abs(s.at(i, j)) > floor) d = std::max(d, j);
        return d;
    };
    int df = ydeg(f), dg = ydeg(g);
    if (df < 0 || dg < 0) throw std::invalid_argument("resultant_y: zero polynomial");
    int n = df + dg;
    if (n == 0) return TruncSeries1::constant(0, Cplx(1));

    int degx = f.order() * dg + g.order() * df + 1;
    int M = degx + 1;
    TruncSeries1 out(degx);
    std::vector<Cplx> vals(static_cast<std::size_t>(M));
    const double two_pi = 6.283185307179586476925286766559;
    for (int k = 0; k < M; ++k) {
        Cplx x0 = std::polar(1.0, two_pi * k / M);
        // univariate coefficients in y at x = x0
        std::vector<Cplx> fa(df + 1), ga(dg + 1);
        for (int j = 0; j <= df; ++j) {
            Cplx acc(0);
            for (int i = f.order(); i >= 0; --i) acc = acc * x0 + f.at(i, j);
            fa[static_cast<std::size_t>(j)] = acc;
        }
        for (int j = 0; j <= dg; ++j) {
            Cplx acc(0);
            for (int i = g.order(); i >= 0; --i) acc = acc * x0 + g.at(i, j);
            ga[static_cast<std::size_t>(j)] = acc;
        }
        Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(n, n);
        for (int r = 0; r < dg; ++r)
            for (int j = 0; j <= df; ++j) syl(r, r + j) = fa[static_cast<std::size_t>(df - j)];
        for (int r = 0; r < df; ++r)
            for (int j = 0; j <= dg; ++j) syl(dg + r, r + j) = ga[static_cast<std::size_t>(dg - j)];
        vals[static_cast<std::size_t>(k)] = syl.determinant();
    }
    // inverse DFT on the unit circle samples
    for (int c = 0; c <= degx; ++c) {
        Cplx acc(0);
        for (int k = 0; k < M; ++k)
            acc += vals[static_cast<std::size_t>(k)] * std::polar(1.0, -two_pi * k * c / M);
        out.set(c, acc / double(M));
    }
    return out;
}

} // namespace folab
