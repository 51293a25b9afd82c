#include "folab/holonomy.hpp"

#include <cmath>

#include "folab/numutil.hpp"
#include "folab/parallel.hpp"

namespace folab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<Cplx> dft_coeffs(const std::vector<Cplx>& w, double rho, int order) {
    int M = static_cast<int>(w.size());
    std::vector<Cplx> a(static_cast<std::size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) {
        Cplx acc(0);
        for (int k = 0; k < M; ++k)
            acc += w[static_cast<std::size_t>(k)] * std::polar(1.0, -kTwoPi * j * k / M);
        a[static_cast<std::size_t>(j)] = acc / double(M) / std::pow(rho, j);
    }
    return a;
}

} // namespace

JetEstimate jet_from_map(const std::function<Cplx(Cplx)>& f, double rho, int order, int samples) {
    std::vector<Cplx> w1(static_cast<std::size_t>(samples)), w2(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(2 * samples), [&](std::size_t i) {
        int k = static_cast<int>(i % static_cast<std::size_t>(samples));
        double r = (i < static_cast<std::size_t>(samples)) ? rho : rho / 2;
        Cplx z = std::polar(r, kTwoPi * k / samples);
        Cplx val = f(z);
        if (i < static_cast<std::size_t>(samples))
            w1[static_cast<std::size_t>(k)] = val;
        else
            w2[static_cast<std::size_t>(k)] = val;
    });
    std::vector<Cplx> a1 = dft_coeffs(w1, rho, order);
    std::vector<Cplx> a2 = dft_coeffs(w2, rho / 2, order);

    JetEstimate est;
    est.c0_abs = std::abs(a1[0]);
    TruncSeries1 s(order);
    est.error_bars.assign(static_cast<std::size_t>(order) + 1, 0.0);
    for (int j = 1; j <= order; ++j) {
        s.set(j, a1[static_cast<std::size_t>(j)]);
        double bar = std::abs(a1[static_cast<std::size_t>(j)] - a2[static_cast<std::size_t>(j)]);
        est.error_bars[static_cast<std::size_t>(j)] = bar;
        double rel = bar / std::max(1.0, std::abs(a1[static_cast<std::size_t>(j)]));
        if (j <= std::min(6, order)) est.max_disagreement = std::max(est.max_disagreement, rel);
    }
    est.consistent = est.max_disagreement < 1e-6;
    if (est.max_disagreement > 1e-2)
        throw JetInconsistent("jet_from_map: two-radius estimates disagree grossly (" +
                              std::to_string(est.max_disagreement) + ")");
    est.jet = JetDiffeo(std::move(s), 1e-6);
    return est;
}

HolonomyJet holonomy_jet(const OneForm& adapted, const LoopSpec& loop, const Transversal& trans,
                         int order, const Config& cfg, const std::vector<Cplx>& avoid) {
    double r = std::abs(loop.base_u - loop.center);
    if (r <= 0) throw std::invalid_argument("holonomy_jet: basepoint coincides with the center");
    for (Cplx p : avoid) {
        double d = std::abs(std::abs(p - loop.center) - r);
        if (std::abs(p - loop.center) < 1e-12) continue; // the encircled point itself
        if (d < r / 2)
            throw std::invalid_argument("holonomy_jet: loop passes too close to another singular point");
    }
    // transversality margin at the basepoint
    auto dir = adapted.leaf_direction(loop.base_u, Cplx(0), cfg.eps_zero);
    double ang = direction_angle(dir.first, dir.second, Cplx(0), Cplx(1));
    if (ang < trans.theta_min)
        throw TransversalityFailure("holonomy_jet: transversal tangent to the foliation at basepoint");

    double tube = 0.9;
    auto lift_once = [&](Cplx v0, double turns) {
        Path p = Path::circle(loop.center, loop.base_u, turns);
        return lift_path(adapted, p, v0, cfg.ode_tol, tube).y;
    };

    // probe the multiplier with a tiny lift
    double rho = trans.radius / 4;
    Cplx probe0 = Cplx(rho * 1e-2, 0);
    Cplx probe1 = lift_once(probe0, loop.turns);
    double mod = std::abs(probe1 / probe0);

    HolonomyJet out;
    out.loop = loop;
    out.transversal = trans;
    out.computed_via_inverse = mod > 1.0 + 1e-9;
    double turns = out.computed_via_inverse ? -loop.turns : loop.turns;
    JetEstimate raw = jet_from_map([&](Cplx z) { return lift_once(z, turns); }, rho, order,
                                   loop.samples);
    if (out.computed_via_inverse) {
        JetEstimate inv = raw;
        inv.jet = inverse1(raw.jet);
        out.est = inv;
    } else {
        out.est = raw;
    }
    out.multiplier = out.est.jet.multiplier();
    return out;
}

IndexMatchReport multiplier_matches_index(const HolonomyJet& h, Cplx cs_index, double tol) {
    IndexMatchReport rep;
    rep.multiplier = h.multiplier;
    rep.expected = std::exp(Cplx(0, kTwoPi) * cs_index);
    rep.deviation = std::abs(rep.multiplier - rep.expected);
    rep.pass = rep.deviation < tol * std::max(1.0, std::abs(rep.expected));
    return rep;
}

Cplx leaf_transport(const OneForm& wL, Cplx from_u, Cplx from_v, const CurveGerm& target,
                    double tol, double tube) {
    // graph mode: integrate v over u when |b| dominates, else u over v
    Cplx a0 = wL.a.eval(from_u, from_v), b0 = wL.b.eval(from_u, from_v);
    bool over_u = std::abs(b0) >= std::abs(a0);
    OneForm form = over_u ? wL : wL.swap_xy();
    // working position in (independent, dependent) coordinates
    Cplx pu = over_u ? from_u : from_v;
    Cplx pv = over_u ? from_v : from_u;

    auto target_pt = [&](Cplx s) {
        auto [tx, ty] = target.point(s);
        return over_u ? std::pair<Cplx, Cplx>{tx, ty} : std::pair<Cplx, Cplx>{ty, tx};
    };
    auto target_vel = [&](Cplx s) {
        auto [vx, vy] = target.velocity(s);
        return over_u ? std::pair<Cplx, Cplx>{vx, vy} : std::pair<Cplx, Cplx>{vy, vx};
    };

    // linear seed: from + t * leaf_dir = s * tangent
    auto [lx, ly] = wL.leaf_direction(from_u, from_v, 1e-14);
    auto [tx, ty] = target.tangent_at_zero();
    Cplx denom = tx * ly - ty * lx;
    if (std::abs(denom) < 1e-10 * (std::abs(lx) + std::abs(ly)) * (std::abs(tx) + std::abs(ty)))
        throw TransversalityFailure("leaf_transport: target curve tangent to the leaves");
    Cplx s = (from_u * ly - from_v * lx) / denom;

    double scale = std::max({1.0, std::abs(from_u), std::abs(from_v)});
    for (int it = 0; it < 40; ++it) {
        auto [qu, qv] = target_pt(s);
        OdeResult r = lift_path(form, Path::segment(pu, qu), pv, tol, tube);
        pu = qu;
        pv = r.y;
        Cplx g = pv - qv;
        if (std::abs(g) <= 50 * tol * scale + 1e-14) return s;
        // dG/ds = slope * qu'(s) - qv'(s), slope = -a/b at the landing point
        Cplx av = form.a.eval(pu, pv), bv = form.b.eval(pu, pv);
        if (std::abs(bv) < 1e-13)
            throw StepCollapse("leaf_transport: leaf became vertical at the landing point");
        auto [du, dv] = target_vel(s);
        Cplx dg = (-av / bv) * du - dv;
        if (std::abs(dg) < 1e-14)
            throw TransversalityFailure("leaf_transport: stationary intersection equation");
        s -= g / dg;
    }
    throw ToleranceNotMet("leaf_transport: Newton iteration did not converge");
}

JetEstimate dulac_map(const OneForm& wL_corner, int order, const Config& cfg, double rho) {
    // leaf direction at the corner must be transverse to both axes
    auto [dx, dy] = wL_corner.leaf_direction(Cplx(0), Cplx(0), cfg.eps_zero);
    if (direction_angle(dx, dy, Cplx(1), Cplx(0)) < 0.05 ||
        direction_angle(dx, dy, Cplx(0), Cplx(1)) < 0.05)
        throw TransversalityFailure("dulac_map: fibration tangent to a divisor branch at the corner");
    CurveGerm target = CurveGerm::axis_y(order + 2);
    return jet_from_map(
        [&](Cplx z) { return leaf_transport(wL_corner, z, Cplx(0), target, cfg.ode_tol); }, rho,
        order, 64);
}

JetEstimate project_along_leaves(const OneForm& wL, const CurveGerm& source,
                                 const CurveGerm& target, int order, const Config& cfg,
                                 double rho) {
    auto [dx, dy] = wL.leaf_direction(Cplx(0), Cplx(0), cfg.eps_zero);
    auto [sx, sy] = source.tangent_at_zero();
    auto [tx, ty] = target.tangent_at_zero();
    if (direction_angle(dx, dy, sx, sy) < 0.05 || direction_angle(dx, dy, tx, ty) < 0.05)
        throw TransversalityFailure("project_along_leaves: curve tangent to the leaves");
    return jet_from_map(
        [&](Cplx s) {
            auto [pu, pv] = source.point(s);
            return leaf_transport(wL, pu, pv, target, cfg.ode_tol);
        },
        rho, order, 64);
}

} // namespace folab
