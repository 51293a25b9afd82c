#include "folab/sliding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "folab/numutil.hpp"

namespace folab {

TruncSeries1 implicit_branch(const TruncSeries2& q, int order, double eps) {
    Cplx qu = q.at(1, 0), qv = q.at(0, 1);
    double scale = std::max(1.0, q.max_abs());
    if (std::abs(q.at(0, 0)) > eps * scale)
        throw std::invalid_argument("implicit_branch: curve does not pass through the origin");
    if (std::abs(qv) <= 1e-6 * (std::abs(qu) + std::abs(qv)))
        throw TransversalityFailure("implicit_branch: branch nearly vertical, reorient first");
    TruncSeries1 t(order);
    t.set(1, -qu / qv);
    TruncSeries1 id = TruncSeries1::identity(order);
    for (int k = 2; k <= order; ++k) {
        TruncSeries1 r = restrict_to_curve(q.with_order(order + 1), id, t, eps);
        t.set(k, -r.at(k) / qv);
    }
    return t;
}

TruncSeries1 invariant_branch(const OneForm& germ, Cplx slope, int order, double eps) {
    TruncSeries1 w(order);
    w.set(1, slope);
    TruncSeries1 id = TruncSeries1::identity(order);
    auto residual = [&](const TruncSeries1& cand) {
        // a(u, w(u)) + b(u, w(u)) w'(u), one order beyond to keep degree k
        TruncSeries1 ra = restrict_to_curve(germ.a.with_order(order + 1), id, cand, eps);
        TruncSeries1 rb = restrict_to_curve(germ.b.with_order(order + 1), id, cand, eps);
        return (ra + rb * cand.derivative().with_order(ra.order())).with_order(order);
    };
    for (int k = 2; k <= order; ++k) {
        TruncSeries1 r0 = residual(w);
        TruncSeries1 bumped = w;
        bumped.set(k, w.at(k) + Cplx(1));
        TruncSeries1 r1 = residual(bumped);
        Cplx deriv = r1.at(k) - r0.at(k);
        if (std::abs(deriv) < 1e-12)
            throw std::domain_error("invariant_branch: resonant coefficient at order " +
                                    std::to_string(k));
        w.set(k, w.at(k) - r0.at(k) / deriv);
    }
    return w;
}

TruncSeries1 leaf_jet_through_origin(const OneForm& wL, int order, double eps) {
    Cplx a0 = wL.a.at(0, 0);
    double scale = std::max(wL.a.max_abs(), wL.b.max_abs());
    if (std::abs(a0) <= eps * std::max(1.0, scale))
        throw TransversalityFailure("leaf_jet_through_origin: leaf tangent to {v=0}");
    TruncSeries1 g = TruncSeries1::zero(order); // u = g(v)
    TruncSeries1 idv = TruncSeries1::identity(order);
    for (int it = 0; it < order + 1; ++it) {
        TruncSeries1 ra = restrict_to_curve(wL.a.with_order(order + 1), g, idv, eps);
        TruncSeries1 rb = restrict_to_curve(wL.b.with_order(order + 1), g, idv, eps);
        TruncSeries1 rhs = (rb * invert_unit1(ra, eps)).scale(Cplx(-1));
        g = rhs.antiderivative().with_order(order);
    }
    return g;
}

TangentBranch tangent_branch_local(const OneForm& F_germ, const OneForm& L_germ, int order,
                                   double eps) {
    int n = std::max(order + 2, std::min(F_germ.order(), L_germ.order()));
    TruncSeries2 q = L_germ.b.with_order(n) * F_germ.a.with_order(n) -
                     L_germ.a.with_order(n) * F_germ.b.with_order(n);
    if (q.is_zero(eps))
        throw std::invalid_argument("tangent curve is identically zero (the foliations coincide)");
    if (q.valuation(eps) != 1)
        throw TransversalityFailure("tangent curve is not smooth at the singular point");
    TangentBranch br;
    Cplx qu = q.at(1, 0), qv = q.at(0, 1);
    if (std::abs(qv) <= 1e-8 * (std::abs(qu) + std::abs(qv)))
        throw TransversalityFailure("tangent branch tangent to the transverse axis");
    br.slope = -qu / qv;
    TruncSeries1 t = implicit_branch(q, order + 2, eps);
    br.curve = CurveGerm::graph_over_x(t);
    return br;
}

TangentCurve tangent_curve(const OneForm& wF, const OneForm& wL, int order, const Config& cfg) {
    TangentCurve tc;
    int n = std::max(wF.order(), wL.order());
    tc.q = wL.b.with_order(2 * n) * wF.a.with_order(2 * n) -
           wL.a.with_order(2 * n) * wF.b.with_order(2 * n);
    if (tc.q.is_zero(cfg.eps_zero))
        throw std::invalid_argument("tangent_curve: q = d a - c b vanishes identically");

    Classification cl = classify_germ(wF, cfg);
    if (cl.type == SingType::ReducedNondegenerate) {
        TangentBranch br = tangent_branch_local(wF, wL, order, cfg.eps_zero);
        br.point_id = -1;
        // angles to the separatrix directions (the coordinate axes of a
        // Mattei-Moussu style germ are handled by the generic eigen data)
        tc.branches.push_back(br);
        return tc;
    }
    Reduction red = desingularize(wF, cfg);
    FibrationPullback fib = pull_fibration(red, wL, cfg);
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        if (p.type != SingType::ReducedNondegenerate) continue;
        AdaptedPair pair = adapted_pair_at(red, fib, p, p.comp_i, cfg);
        TangentBranch br = tangent_branch_local(pair.F_germ, pair.L_germ, order, cfg.eps_zero);
        br.point_id = pid;
        double a1 = direction_angle(Cplx(1), br.slope, Cplx(1), Cplx(0));
        double a2 = direction_angle(Cplx(1), br.slope, p.sep_direction.first, p.sep_direction.second);
        br.min_sep_angle = std::min(a1, a2);
        tc.branches.push_back(br);
    }
    return tc;
}

SlidingLocal sliding_jet(const OneForm& F_germ, const OneForm& L_germ, const CurveGerm& target,
                         double orientation, int order, const Config& cfg, double rho) {
    double eps = cfg.eps_zero;
    TangentBranch tb = tangent_branch_local(F_germ, L_germ, order, eps);
    Cplx tau = tb.slope;
    if (std::abs(tau) < 0.02 || std::abs(tau) > 50.0)
        throw TransversalityFailure("sliding_jet: tangent branch too close to a separatrix axis");

    // one blow-up of the foliation germ; u-chart: (u, w) -> (u, u w)
    auto [bx, by] = blow_up_point(F_germ, Cplx(0), Cplx(0), eps, Chart{});
    const OneForm& Fhat = bx.strict_f;
    // punctures: singular values of w on the exceptional line
    std::vector<Cplx> punctures;
    for (const DivisorZero& z : singular_points_on_divisor(bx, eps)) punctures.push_back(z.root.value);
    for (Cplx pw : punctures) {
        if (std::abs(pw) < 1e-9) continue;
        if (std::abs(std::abs(pw) - std::abs(tau)) < std::abs(tau) / 2)
            throw std::invalid_argument("sliding_jet: loop cannot clear the second puncture");
    }

    // lifted tangent curve through (0, tau): s -> (s, t(s)/s - tau)
    TruncSeries1 t = tb.curve.cy; // graph over u
    Cplx tau_exact = t.at(1);
    TruncSeries1 wT(t.order() - 1);
    for (int k = 1; k <= wT.order(); ++k) wT.set(k, t.at(k + 1));
    CurveGerm Tcentered{TruncSeries1::identity(wT.order()), wT};

    OneForm Fhat_centered = Fhat.translate(Cplx(0), tau_exact);
    OneForm Fhat_swapped = Fhat.swap_xy(); // (w, u) ordering for loop lifting

    double tube = 0.9;
    auto holonomy_T = [&](Cplx s, double turns) {
        // start on the lifted tangent curve
        Cplx w0 = tau_exact + wT.eval(s);
        Path loop = Path::circle(Cplx(0), w0, turns);
        Cplx u_end = lift_path(Fhat_swapped, loop, s, cfg.ode_tol, tube).y;
        // back onto the tangent curve along the leaf (local germ at (0, tau))
        return leaf_transport(Fhat_centered, u_end, w0 - tau_exact, Tcentered, cfg.ode_tol);
    };

    auto sample_map = [&](Cplx z, double turns) {
        // z on the target curve -> tangent-curve parameter
        auto [zu, zv] = target.point(z);
        Cplx s = leaf_transport(L_germ, zu, zv, tb.curve, cfg.ode_tol);
        Cplx s2 = holonomy_T(s, turns);
        auto [tu, tv] = tb.curve.point(s2);
        return leaf_transport(L_germ, tu, tv, target, cfg.ode_tol);
    };

    SlidingLocal out;
    out.tangent_slope = tau_exact;
    Cplx probe0(rho * 1e-2, 0);
    Cplx probe1 = sample_map(probe0, orientation);
    out.computed_via_inverse = std::abs(probe1 / probe0) > 1.0 + 1e-9;
    double turns = out.computed_via_inverse ? -orientation : orientation;
    JetEstimate raw =
        jet_from_map([&](Cplx z) { return sample_map(z, turns); }, rho, order, 64);
    if (out.computed_via_inverse) raw.jet = inverse1(raw.jet);
    out.jet = raw;
    out.multiplier = raw.jet.multiplier();
    return out;
}

FibrationPullback pull_fibration(const Reduction& red, const OneForm& wL, const Config& cfg) {
    const ReductionTree& tree = red.tree;
    double eps = cfg.eps_zero;
    FibrationPullback fib;
    fib.strict_by_chart.resize(tree.charts.size());
    fib.mult_by_comp.assign(red.graph.components.size(), 0);
    fib.absolutely_dicritical = true;
    fib.strict_by_chart[0] = wL;

    for (const ReductionNode& node : tree.nodes) {
        const OneForm& parent = fib.strict_by_chart[static_cast<std::size_t>(node.parent_chart)];
        auto [px, py] = blow_up_point(parent, node.center_u, node.center_v, eps, Chart{});
        fib.strict_by_chart[static_cast<std::size_t>(node.chart_x)] = px.strict_f;
        fib.strict_by_chart[static_cast<std::size_t>(node.chart_y)] = py.strict_f;
        int m = px.m;
        for (int cid : node.comps_through_center)
            m += fib.mult_by_comp[static_cast<std::size_t>(cid)];
        fib.mult_by_comp[static_cast<std::size_t>(node.comp_created)] = m;

        // transversality of the strict transform along the new component
        for (const PulledBackForm* pb : {&px, &py}) {
            if (is_divisor_invariant(*pb, eps)) {
                fib.absolutely_dicritical = false;
                fib.failures.push_back("component " + std::to_string(node.comp_created) +
                                       " is invariant for the fibration");
                continue;
            }
            TruncSeries1 tng = pb->tangent_coeff_on_divisor();
            double limit = (pb->kind == BranchKind::XChart) ? 1.0 + 1e-8 : 1.0 - 1e-8;
            if (tng.max_abs() == 0) continue;
            for (const ClusteredRoot& r : clustered_roots(tng.coeffs(), eps))
                if (std::abs(r.value) <= limit) {
                    fib.absolutely_dicritical = false;
                    fib.failures.push_back("fibration tangent to component " +
                                           std::to_string(node.comp_created) + " at coordinate " +
                                           std::to_string(r.value.real()));
                }
        }
    }

    // transversality to the separatrices of the strict foliation
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        const ChartRecord& cr = tree.charts[static_cast<std::size_t>(p.chart_id)];
        bool axis_x_owner = cr.comp_x && *cr.comp_x == p.comp_i;
        const OneForm& sl = fib.strict_by_chart[static_cast<std::size_t>(p.chart_id)];
        OneForm lg = axis_x_owner ? sl.translate(Cplx(0), p.coord).swap_xy()
                                  : sl.translate(p.coord, Cplx(0));
        Cplx av = lg.a.at(0, 0), bv = lg.b.at(0, 0);
        if (std::abs(av) + std::abs(bv) < eps * std::max(lg.a.max_abs(), lg.b.max_abs())) {
            fib.sep_transverse = false;
            fib.failures.push_back("fibration singular at point " + std::to_string(pid));
            continue;
        }
        // leaf direction (b, -a), divisor direction (1,0), separatrix direction stored
        double ang_div = direction_angle(bv, -av, Cplx(1), Cplx(0));
        double ang_sep =
            direction_angle(bv, -av, p.sep_direction.first, p.sep_direction.second);
        if (p.is_corner) ang_sep = direction_angle(bv, -av, Cplx(0), Cplx(1));
        if (ang_div < 0.05 || ang_sep < 0.05) {
            fib.sep_transverse = false;
            fib.failures.push_back("fibration tangent to a separatrix at point " +
                                   std::to_string(pid));
        }
    }
    return fib;
}

AdaptedPair adapted_pair_at(const Reduction& red, const FibrationPullback& fib,
                            const SingularPoint& p, int component, const Config& cfg) {
    const ChartRecord& cr = red.tree.charts[static_cast<std::size_t>(p.chart_id)];
    bool axis_x_owner = cr.comp_x && *cr.comp_x == p.comp_i;
    const OneForm& sl = fib.strict_by_chart[static_cast<std::size_t>(p.chart_id)];
    OneForm Fg = p.germ_i;
    OneForm Lg = axis_x_owner ? sl.translate(Cplx(0), p.coord).swap_xy()
                              : sl.translate(p.coord, Cplx(0));
    double mL = std::max(Lg.a.max_abs(), Lg.b.max_abs());
    if (mL > 0) Lg = Lg.scale(Cplx(1.0 / mL));

    AdaptedPair pair{Fg, Lg, 1.0};
    int first = p.is_corner ? std::min(p.comp_i, p.comp_j) : p.comp_i;
    if (component == p.comp_i) {
        pair.orientation = (component == first) ? 1.0 : -1.0;
        return pair;
    }
    if (!p.is_corner || component != p.comp_j)
        throw std::invalid_argument("adapted_pair_at: component does not pass through the point");
    pair.F_germ = Fg.swap_xy();
    pair.L_germ = Lg.swap_xy();
    pair.orientation = (component == first) ? 1.0 : -1.0;
    return pair;
}

SlidingSet sliding_set(const Reduction& red, const FibrationPullback& fib, int order,
                       const Config& cfg) {
    if (!fib.absolutely_dicritical || !fib.sep_transverse)
        throw std::invalid_argument("sliding_set: fibration fails the transversality contract: " +
                                    (fib.failures.empty() ? std::string("?") : fib.failures[0]));
    SlidingSet set;
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        if (p.type != SingType::ReducedNondegenerate)
            throw std::invalid_argument("sliding_set: point " + std::to_string(pid) +
                                        " is not reduced nondegenerate (" + to_string(p.type) + ")");
        AdaptedPair pair = adapted_pair_at(red, fib, p, p.comp_i, cfg);
        SlidingEntry e;
        e.point_id = pid;
        e.component = p.comp_i;
        e.chart_id = p.chart_id;
        e.coord = p.coord;
        e.local = sliding_jet(pair.F_germ, pair.L_germ, CurveGerm::axis_x(order + 2),
                              pair.orientation, order, cfg);
        set.entries.push_back(e);
        if (p.is_corner) {
            // derive the second entry by pushing through the Dulac map
            JetEstimate d = dulac_map(pair.L_germ, order, cfg);
            SlidingEntry e2 = e;
            e2.component = p.comp_j;
            e2.derived_from_dulac = true;
            e2.local.jet.jet = compose1(compose1(d.jet, e.local.jet.jet), inverse1(d.jet));
            e2.local.multiplier = e2.local.jet.jet.multiplier();
            set.entries.push_back(e2);
        }
    }
    std::sort(set.entries.begin(), set.entries.end(), [](const SlidingEntry& a, const SlidingEntry& b) {
        if (a.point_id != b.point_id) return a.point_id < b.point_id;
        return a.component < b.component;
    });
    return set;
}

SlidingCompare compare_sliding_jets(const SlidingSet& s1, const SlidingSet& s2, int order,
                                    double tol) {
    if (s1.entries.size() != s2.entries.size())
        throw std::invalid_argument("compare_sliding_jets: entry counts differ");
    SlidingCompare out;
    for (std::size_t i = 0; i < s1.entries.size(); ++i) {
        const SlidingEntry& a = s1.entries[i];
        const SlidingEntry& b = s2.entries[i];
        if (a.component != b.component || a.chart_id != b.chart_id ||
            std::abs(a.coord - b.coord) > 0.1)
            throw std::invalid_argument("compare_sliding_jets: index sets do not match");
        SlidingCompareRow row;
        row.component = a.component;
        row.coord = a.coord;
        int n = std::min({order, a.local.jet.jet.order(), b.local.jet.jet.order()});
        double dev = 0;
        for (int k = 1; k <= n; ++k)
            dev = std::max(dev, std::abs(a.local.jet.jet.at(k) - b.local.jet.jet.at(k)));
        row.deviation = dev;
        out.max_deviation = std::max(out.max_deviation, dev);
        out.rows.push_back(row);
    }
    out.equal = out.max_deviation < tol;
    return out;
}

FibrationCombination combine_fibrations(const std::vector<OneForm>& candidates,
                                        const Reduction& red, const Config& cfg) {
    if (candidates.empty()) throw std::invalid_argument("combine_fibrations: no candidates");
    double eps = cfg.eps_zero;

    std::vector<FibrationPullback> pulls;
    for (const OneForm& c : candidates) {
        FibrationPullback f = pull_fibration(red, c, cfg);
        if (!f.absolutely_dicritical)
            throw std::invalid_argument("combine_fibrations: candidate is not absolutely dicritical: " +
                                        (f.failures.empty() ? std::string("?") : f.failures[0]));
        if (!pulls.empty() && f.mult_by_comp != pulls.front().mult_by_comp)
            throw std::invalid_argument("combine_fibrations: divisor multiplicities differ between candidates");
        pulls.push_back(std::move(f));
    }

    FibrationCombination out;
    if (candidates.size() == 1) {
        out.combined = candidates[0];
        out.coefficients = {Cplx(1)};
        out.certificate = pulls[0];
        out.notes.push_back("single candidate returned unchanged");
        return out;
    }

    // marked points: active singular points plus one generic point per
    // component (divisor coordinate 1/2 in the birth chart)
    struct Marked {
        int chart_id;
        BranchKind axis;
        Cplx coord;
    };
    std::vector<Marked> marked;
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        const ChartRecord& cr = red.tree.charts[static_cast<std::size_t>(p.chart_id)];
        bool axis_x_owner = cr.comp_x && *cr.comp_x == p.comp_i;
        marked.push_back({p.chart_id, axis_x_owner ? BranchKind::XChart : BranchKind::YChart, p.coord});
    }
    for (const DivisorComponent& c : red.graph.components)
        marked.push_back({c.chart_axes.front().first, c.chart_axes.front().second, Cplx(0.5)});

    // local transversality data a_ij, b_ij of each candidate at each marked point
    auto local_ab = [&](const FibrationPullback& f, const Marked& m) {
        const OneForm& s = f.strict_by_chart[static_cast<std::size_t>(m.chart_id)];
        Cplx u = (m.axis == BranchKind::XChart) ? Cplx(0) : m.coord;
        Cplx v = (m.axis == BranchKind::XChart) ? m.coord : Cplx(0);
        Cplx normal = (m.axis == BranchKind::XChart) ? s.a.eval(u, v) : s.b.eval(u, v);
        Cplx tangent = (m.axis == BranchKind::XChart) ? s.b.eval(u, v) : s.a.eval(u, v);
        return std::pair<Cplx, Cplx>{normal, tangent};
    };

    std::mt19937_64 rng(cfg.seed);
    int n = static_cast<int>(candidates.size());
    for (int draw = 1; draw <= 200; ++draw) {
        std::vector<Cplx> c(static_cast<std::size_t>(n));
        bool nonzero = false;
        for (Cplx& ci : c) {
            long v = static_cast<long>(rng() % 19) - 9;
            ci = Cplx(double(v));
            if (v != 0) nonzero = true;
        }
        if (!nonzero) continue;
        bool ok = true;
        for (const Marked& m : marked) {
            Cplx aj(0), bj(0);
            for (int i = 0; i < n; ++i) {
                auto [ai, bi] = local_ab(pulls[static_cast<std::size_t>(i)], m);
                aj += c[static_cast<std::size_t>(i)] * ai;
                bj += c[static_cast<std::size_t>(i)] * bi;
            }
            if (std::abs(aj) < 1e-6 || std::abs(bj) < 1e-6) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        OneForm comb = candidates[0].scale(c[0]);
        for (int i = 1; i < n; ++i) comb = comb + candidates[static_cast<std::size_t>(i)].scale(c[static_cast<std::size_t>(i)]);
        FibrationPullback cert = pull_fibration(red, comb, cfg);
        if (!cert.absolutely_dicritical || !cert.sep_transverse) continue;
        out.combined = comb;
        out.coefficients = c;
        out.draws = draw;
        out.certificate = cert;
        return out;
    }
    throw std::runtime_error("combine_fibrations: exhausted draws without a transverse combination");
    (void)eps;
}

MembershipCertificate family_membership(const OneForm& wL, const OneForm& wL0,
                                        const Reduction& red, int order, const Config& cfg) {
    MembershipCertificate cert;
    FibrationPullback f1 = pull_fibration(red, wL, cfg);
    FibrationPullback f0 = pull_fibration(red, wL0, cfg);
    if (!f1.absolutely_dicritical)
        cert.failures.push_back("candidate fibration not absolutely dicritical");
    if (!f0.absolutely_dicritical)
        cert.failures.push_back("base fibration not absolutely dicritical");

    // Dulac maps at corners (in the lower-id component's adapted frame)
    for (const Corner& c : red.graph.corners) {
        const ChartRecord& cr = red.tree.charts[static_cast<std::size_t>(c.chart_id)];
        auto corner_germ = [&](const FibrationPullback& f) {
            OneForm g = f.strict_by_chart[static_cast<std::size_t>(c.chart_id)];
            int owner = std::min(c.comp_a, c.comp_b);
            bool owner_on_x = cr.comp_x && *cr.comp_x == owner;
            // adapted: owner = {v=0}; swap when the owner sits on the x-axis
            return owner_on_x ? g.swap_xy() : g;
        };
        JetEstimate d1 = dulac_map(corner_germ(f1), order, cfg);
        JetEstimate d0 = dulac_map(corner_germ(f0), order, cfg);
        double res = jet_distance(d1.jet, d0.jet);
        cert.dulac_residuals.push_back(res);
        if (res > 1e-6)
            cert.failures.push_back("Dulac maps differ at corner of components " +
                                    std::to_string(c.comp_a) + "," + std::to_string(c.comp_b));
    }

    // tangency of invariant curves at the singular points
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        AdaptedPair a1 = adapted_pair_at(red, f1, p, p.comp_i, cfg);
        AdaptedPair a0 = adapted_pair_at(red, f0, p, p.comp_i, cfg);
        TruncSeries1 g1 = leaf_jet_through_origin(a1.L_germ, order, cfg.eps_zero);
        TruncSeries1 g0 = leaf_jet_through_origin(a0.L_germ, order, cfg.eps_zero);
        TruncSeries1 diff = g1 - g0;
        int tangency = diff.valuation(1e-8);
        if (tangency == kValInfinity) tangency = order + 1;
        cert.tangency_orders.push_back(tangency);
        if (tangency < 2)
            cert.failures.push_back("invariant curves not tangent at point " + std::to_string(pid));
    }
    cert.member = cert.failures.empty();
    return cert;
}

} // namespace folab
