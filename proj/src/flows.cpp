#include "folab/flows.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace folab {

VectorField::VectorField(TruncSeries2 p, TruncSeries2 q) : P(std::move(p)), Q(std::move(q)) {
    if (P.order() != Q.order()) {
        int n = std::max(P.order(), Q.order());
        P = P.with_order(n);
        Q = Q.with_order(n);
    }
    if (P.max_abs() == 0 && Q.max_abs() == 0)
        throw std::invalid_argument("VectorField: both components vanish");
}

VectorField VectorField::hamiltonian(const TruncSeries2& q) {
    return VectorField(q.dy(), q.dx().scale(Cplx(-1)));
}

TruncSeries2 apply_field(const VectorField& X, const TruncSeries2& g) {
    int n = std::min(X.order(), g.order() - 1);
    if (n < 0) n = 0;
    return X.P.with_order(n) * g.dx().with_order(n) + X.Q.with_order(n) * g.dy().with_order(n);
}

TruncSeries2 lie_series(const TruncSeries2& g, const TruncSeries2& f, const VectorField& X,
                        double eps) {
    int n = g.order();
    TruncSeries2 fn = f.with_order(n);
    TruncSeries2 acc = g;
    TruncSeries2 deriv = g;            // X^i(g)
    TruncSeries2 fpow = TruncSeries2::constant(n, Cplx(1)); // f^i / i!
    double scale = std::max(1.0, g.max_abs());
    double prev = 0;
    int stall = 0;
    const int max_iter = 4 * n + 80;
    for (int i = 1; i <= max_iter; ++i) {
        deriv = apply_field(X, deriv.with_order(n + 1)).with_order(n);
        fpow = (fpow * fn).scale(Cplx(1.0 / i));
        TruncSeries2 term = deriv * fpow;
        double tn = term.max_abs();
        if (tn <= 1e-17 * scale) return acc + term;
        acc = acc + term;
        scale = std::max(scale, acc.max_abs());
        if (i > n && tn >= prev && tn > eps * scale) {
            if (++stall > 6)
                throw std::domain_error(
                    "lie_series: non-terminating adjoint series at jet scale (valuation 0)");
        } else {
            stall = 0;
        }
        prev = tn;
    }
    throw std::domain_error("lie_series: adjoint series did not converge");
}

JetMap2 exp_flow(const TruncSeries2& f, const VectorField& X, int order, double eps) {
    TruncSeries2 x = TruncSeries2::var_x(order), y = TruncSeries2::var_y(order);
    return JetMap2(lie_series(x, f.with_order(order), X, eps),
                   lie_series(y, f.with_order(order), X, eps), eps);
}

TruncSeries2 solve_alpha(const TruncSeries2& f_target, const VectorField& X,
                         const TruncSeries2& tau, int n, int order, double eps) {
    if (n < 2) throw std::invalid_argument("solve_alpha: n must be >= 2");
    TruncSeries2 xy = TruncSeries2::var_x(order) + TruncSeries2::var_y(order);
    TruncSeries2 ft = f_target.with_order(order);
    TruncSeries2 taun = tau.with_order(order);

    // shape check: f = (1 + tau^n h)(x+y)
    DivisionResult by_xy = divide_with_remainder(ft, xy, eps);
    if (by_xy.remainder_valuation <= order)
        throw std::invalid_argument("solve_alpha: target is not a multiple of (x+y)");
    TruncSeries2 ratio = by_xy.quotient; // 1 + tau^n h
    ratio.set(0, 0, ratio.at(0, 0) - Cplx(1));
    TruncSeries2 taup = TruncSeries2::constant(order, Cplx(1));
    for (int i = 0; i < n; ++i) taup = taup * taun;
    DivisionResult by_taun = divide_with_remainder(ratio, taup, eps);
    if (by_taun.remainder_valuation <= order)
        throw std::invalid_argument("solve_alpha: target lacks the (1 + tau^n h)(x+y) shape");
    TruncSeries2 h = by_taun.quotient;

    TruncSeries2 taun1 = TruncSeries2::constant(order, Cplx(1));
    for (int i = 0; i + 1 < n; ++i) taun1 = taun1 * taun;

    TruncSeries2 alpha = xy * h; // first-order seed
    double fscale = std::max(1.0, ft.max_abs());
    double best = 1e300;
    for (int it = 0; it < 2 * order + 8; ++it) {
        TruncSeries2 resid = lie_series(xy, taun1 * alpha, X, eps) - ft;
        double rn = resid.max_abs();
        if (rn <= 1e-13 * fscale) break;
        if (rn >= best) break; // stagnation
        best = rn;
        DivisionResult corr = divide_with_remainder(resid, taup, eps);
        alpha = alpha - corr.quotient;
    }
    return alpha;
}

TruncSeries2 pairing(const JetMap2& phi, const OneForm& wL, double eps) {
    int n = std::min(phi.order(), wL.order() + 1) - 1;
    if (n < 0) n = 0;
    TruncSeries2 c = wL.a.with_order(n), d = wL.b.with_order(n);
    TruncSeries2 cphi = compose2(wL.a.with_order(n + 1), phi.f1.with_order(n + 1),
                                 phi.f2.with_order(n + 1), eps)
                            .with_order(n);
    TruncSeries2 dphi = compose2(wL.b.with_order(n + 1), phi.f1.with_order(n + 1),
                                 phi.f2.with_order(n + 1), eps)
                            .with_order(n);
    TruncSeries2 p1x = phi.f1.dx().with_order(n), p1y = phi.f1.dy().with_order(n);
    TruncSeries2 p2x = phi.f2.dx().with_order(n), p2y = phi.f2.dy().with_order(n);
    return c * (cphi * p1y + dphi * p2y) - d * (cphi * p1x + dphi * p2x);
}

namespace {

// layerwise least-squares solve of P = u*G + v*q through the truncation
// order; returns u and the first failing degree (order+1 when fully reduced)
struct IdealReduce {
    TruncSeries2 u;
    int achieved;
};

IdealReduce ideal_reduce(const TruncSeries2& P, const TruncSeries2& G, const TruncSeries2& q,
                         double eps) {
    int n = P.order();
    int vG = G.valuation(eps), vq = q.valuation(eps);
    if (vG == kValInfinity) throw std::invalid_argument("ideal_reduce: zero generator");
    TruncSeries2 u(n), v(n);
    double scale = std::max(1.0, P.max_abs());
    int achieved = n + 1;
    for (int d = std::min(vG, vq); d <= n; ++d) {
        TruncSeries2 partial = (u * G.with_order(n) + v * q.with_order(n)).homogeneous_part(d);
        Eigen::VectorXcd rhs(d + 1);
        for (int j = 0; j <= d; ++j) rhs(j) = P.at(d - j, j) - partial.at(d - j, j);
        int mu = d - vG, mv = d - vq;
        int cols = (mu >= 0 ? mu + 1 : 0) + (mv >= 0 ? mv + 1 : 0);
        if (cols == 0) {
            if (rhs.lpNorm<Eigen::Infinity>() > eps * scale) { achieved = d; break; }
            continue;
        }
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d + 1, cols);
        for (int k = 0; k <= mu; ++k)
            for (int j = 0; j <= vG; ++j) A(k + j, k) += G.at(vG - j, j);
        int off = (mu >= 0 ? mu + 1 : 0);
        for (int k = 0; k <= mv; ++k)
            for (int j = 0; j <= vq; ++j) A(k + j, off + k) += q.at(vq - j, j);
        Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(rhs);
        for (int k = 0; k <= mu; ++k) u.set(mu - k, k, u.at(mu - k, k) + sol(k));
        for (int k = 0; k <= mv; ++k) v.set(mv - k, k, v.at(mv - k, k) + sol(off + k));
        Eigen::VectorXcd resid = rhs - A * sol;
        if (resid.lpNorm<Eigen::Infinity>() > 1e3 * eps * scale) { achieved = d; break; }
    }
    return IdealReduce{u, achieved};
}

} // namespace

SolveUResult solve_u(const TruncSeries2& f, const TruncSeries2& q, const OneForm& wL, int order,
                     int n_min, double eps) {
    if (f.valuation(eps) < n_min)
        throw std::invalid_argument("solve_u: val(f) below the configured minimum " +
                                    std::to_string(n_min));
    TruncSeries2 qn = q.with_order(order);
    VectorField Xq = VectorField::hamiltonian(qn.with_order(order + 1));
    TruncSeries2 h = wL.a.with_order(order) * qn.dy().with_order(order) -
                     wL.b.with_order(order) * qn.dx().with_order(order);
    if (h.is_zero(eps))
        throw std::invalid_argument("solve_u: h = c dq/dy - d dq/dx vanishes identically "
                                    "(fibration tangent to the level foliation of q)");

    TruncSeries2 u_total(order);
    JetMap2 phi = JetMap2::identity(order);
    int rem_val = 0;
    int round = 0;
    for (; round < 6; ++round) {
        TruncSeries2 fcur = f.with_order(order) - u_total * qn;
        phi = exp_flow(fcur, Xq, order, eps);
        TruncSeries2 P = pairing(phi, wL.with_order(order), eps).with_order(order);
        DivisionResult div = divide_with_remainder(P, qn.with_order(P.order()), eps);
        rem_val = div.remainder_valuation;
        if (rem_val > P.order()) break;
        TruncSeries2 hphi =
            compose2(h.with_order(order), phi.f1.with_order(order), phi.f2.with_order(order), eps);
        TruncSeries2 G = h * hphi;
        IdealReduce red = ideal_reduce(P, G.with_order(P.order()), qn.with_order(P.order()), eps);
        if (red.u.max_abs() == 0) break; // no further progress possible
        u_total = u_total + red.u.with_order(order);
    }
    return SolveUResult{u_total, rem_val, phi, round};
}

JetDiffeo linearize_jet(const JetDiffeo& h, double delta_small) {
    int n = h.order();
    Cplx mu = h.multiplier();
    for (int j = 2; j <= n; ++j) {
        double div = std::abs(std::pow(mu, j) - mu);
        if (div <= delta_small)
            throw SmallDivisor(j, div,
                               "linearize_jet: small divisor |mu^" + std::to_string(j) +
                                   " - mu| = " + std::to_string(div));
    }
    // solve phi(h(z)) = mu * phi(z) order by order, phi'(0) = 1
    TruncSeries1 phi(n);
    phi.set(1, Cplx(1));
    for (int j = 2; j <= n; ++j) {
        TruncSeries1 lhs = compose(phi, h.series(), 0.0);
        TruncSeries1 rhs = phi.scale(mu);
        Cplx num = lhs.at(j) - rhs.at(j);
        phi.set(j, -num / (std::pow(mu, j) - mu));
    }
    return JetDiffeo(std::move(phi));
}

CentralizerReport centralizer_forcing(const JetDiffeo& h, int order, double guard) {
    CentralizerReport rep;
    Cplx mu = h.multiplier();
    int n = std::min(order, h.order());
    TruncSeries1 psi(n);
    psi.set(1, Cplx(1));
    for (int j = 2; j <= n; ++j) {
        Cplx div = std::pow(mu, j) - mu;
        rep.divisors.push_back(std::abs(div));
        if (std::abs(div) <= guard) {
            rep.resonant = true;
            if (rep.resonant_power == 0) rep.resonant_power = j;
            rep.forced.push_back(0.0);
            continue;
        }
        // coefficient j of psi(h) - h(psi), with psi_j unknown:
        // psi_j*(mu^j - mu) + T_j(lower) = 0
        TruncSeries1 lhs = compose(psi, h.series(), 0.0);
        TruncSeries1 rhs = compose(h.series(), psi, 0.0);
        Cplx tj = lhs.at(j) - rhs.at(j);
        Cplx aj = -tj / div;
        psi.set(j, aj);
        rep.forced.push_back(std::abs(aj));
        rep.max_forced = std::max(rep.max_forced, std::abs(aj));
    }
    rep.identity_forced = !rep.resonant && rep.max_forced < 1e-10;
    return rep;
}

double centralizer_candidate_residual(const JetDiffeo& h, const JetDiffeo& psi) {
    if (std::abs(psi.multiplier() - Cplx(1)) > 1e-10)
        throw std::invalid_argument("centralizer candidate must be tangent to the identity");
    return jet_distance(compose1(psi, h), compose1(h, psi));
}

} // namespace folab
