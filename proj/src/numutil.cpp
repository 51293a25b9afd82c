#include "folab/numutil.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace folab {

std::vector<PolyRoot> poly_roots(const std::vector<Cplx>& coeffs, double eps) {
    double scale = 0;
    for (Cplx c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0) throw std::invalid_argument("poly_roots: zero polynomial");
    double floor = eps * scale;

    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && std::abs(coeffs[d]) <= floor) --d;
    std::vector<PolyRoot> roots;
    if (d == 0) return roots;

    auto eval = [&](Cplx z) {
        Cplx acc(0);
        for (int k = d; k >= 0; --k) acc = acc * z + coeffs[k];
        return std::abs(acc) / scale;
    };

    if (d == 1) {
        Cplx r = -coeffs[0] / coeffs[1];
        roots.push_back({r, eval(r), true});
        return roots;
    }
    if (d == 2) {
        Cplx a = coeffs[2], b = coeffs[1], c = coeffs[0];
        Cplx disc = std::sqrt(b * b - Cplx(4) * a * c);
        // pick the sign avoiding cancellation
        Cplx qq = (std::abs(b + disc) > std::abs(b - disc)) ? (b + disc) : (b - disc);
        Cplx r1, r2;
        if (std::abs(qq) > floor) {
            r1 = -qq / (Cplx(2) * a);
            r2 = (std::abs(r1) > 0) ? c / (a * r1) : -b / a - r1;
        } else {
            r1 = Cplx(0);
            r2 = -b / a;
        }
        roots.push_back({r1, eval(r1), true});
        roots.push_back({r2, eval(r2), true});
        return roots;
    }

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = Cplx(1);
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -coeffs[i] / coeffs[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < d; ++i) {
        Cplx r = es.eigenvalues()(i);
        // one Newton polish step
        Cplx p(0), dp(0);
        for (int k = d; k >= 0; --k) {
            dp = dp * r + p;
            p = p * r + coeffs[k];
        }
        if (std::abs(dp) > floor) r -= p / dp;
        roots.push_back({r, eval(r), false});
    }
    std::sort(roots.begin(), roots.end(), [](const PolyRoot& a, const PolyRoot& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return roots;
}

std::vector<ClusteredRoot> clustered_roots(const std::vector<Cplx>& coeffs, double eps) {
    double scale = 0;
    for (Cplx c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0) throw std::invalid_argument("clustered_roots: zero polynomial");
    double floor = eps * scale;

    // valuation: exact multiplicity of the root at the origin
    std::size_t val = 0;
    while (val < coeffs.size() && std::abs(coeffs[val]) <= floor) ++val;
    std::vector<ClusteredRoot> out;
    if (val == coeffs.size()) return out;
    if (val > 0)
        out.push_back(ClusteredRoot{Cplx(0), static_cast<int>(val), 0.0, true});

    std::vector<Cplx> rest(coeffs.begin() + static_cast<std::ptrdiff_t>(val), coeffs.end());
    std::vector<PolyRoot> roots = poly_roots(rest, eps);
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Cplx sum = roots[i].value;
        double res = roots[i].residual;
        bool exact = roots[i].exact;
        int k = 1;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            double rad = 1e-4 * std::max(1.0, std::abs(roots[i].value));
            if (std::abs(roots[j].value - roots[i].value) < rad) {
                used[j] = true;
                sum += roots[j].value;
                res = std::max(res, roots[j].residual);
                exact = exact && roots[j].exact;
                ++k;
            }
        }
        out.push_back(ClusteredRoot{sum / double(k), k, res, exact && k == 1});
    }
    return out;
}

std::optional<RationalHit> rational_approx(Cplx z, long q_max, double tol) {
    if (std::abs(z.imag()) > tol) return std::nullopt;
    double x = z.real();
    // continued fraction expansion of x
    long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        if (std::abs(x - double(p1) / double(q1)) < tol) {
            return RationalHit{p1, q1};
        }
        if (frac < 1e-18) break;
        double inv = 1.0 / frac;
        long long a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > q_max || q2 < 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    if (q1 <= q_max && std::abs(x - double(p1) / double(q1)) < tol) return RationalHit{p1, q1};
    return std::nullopt;
}

bool is_rational(Cplx z, long q_max, double tol) {
    return rational_approx(z, q_max, tol).has_value();
}

double direction_angle(Cplx v1, Cplx v2, Cplx w1, Cplx w2) {
    double nv = std::sqrt(std::norm(v1) + std::norm(v2));
    double nw = std::sqrt(std::norm(w1) + std::norm(w2));
    if (nv == 0 || nw == 0) throw std::invalid_argument("direction_angle: zero direction");
    Cplx inner = v1 * std::conj(w1) + v2 * std::conj(w2);
    double c = std::abs(inner) / (nv * nw);
    return std::acos(std::min(c, 1.0));
}

} // namespace folab
