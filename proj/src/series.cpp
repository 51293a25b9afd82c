#include "folab/series.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace folab {

namespace {

void check_finite(Cplx v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("non-finite coefficient");
}

double abs_floor(double eps, double scale) { return eps * std::max(1.0, scale); }

} // namespace

// ---------------------------------------------------------------- TruncSeries1

TruncSeries1::TruncSeries1(int order) : order_(order), c_(order + 1) {
    if (order < 0) throw std::invalid_argument("negative order");
}

TruncSeries1::TruncSeries1(int order, std::vector<Cplx> coeffs) : order_(order), c_(std::move(coeffs)) {
    if (order < 0) throw std::invalid_argument("negative order");
    c_.resize(static_cast<std::size_t>(order) + 1);
    for (Cplx v : c_) check_finite(v);
}

TruncSeries1 TruncSeries1::constant(int order, Cplx v) {
    TruncSeries1 s(order);
    s.set(0, v);
    return s;
}

TruncSeries1 TruncSeries1::identity(int order) {
    TruncSeries1 s(order);
    if (order >= 1) s.set(1, Cplx(1));
    return s;
}

void TruncSeries1::set(int k, Cplx v) {
    check_finite(v);
    if (k < 0 || k > order_) throw std::out_of_range("coefficient index beyond order");
    c_[static_cast<std::size_t>(k)] = v;
}

TruncSeries1 TruncSeries1::with_order(int n) const {
    TruncSeries1 s(n);
    for (int k = 0; k <= std::min(n, order_); ++k) s.c_[k] = c_[k];
    return s;
}

int TruncSeries1::valuation(double eps) const {
    double floor = abs_floor(eps, max_abs());
    for (int k = 0; k <= order_; ++k)
        if (std::abs(c_[k]) > floor) return k;
    return kValInfinity;
}

double TruncSeries1::max_abs() const {
    double m = 0;
    for (Cplx v : c_) m = std::max(m, std::abs(v));
    return m;
}

Cplx TruncSeries1::eval(Cplx z) const {
    Cplx acc(0);
    for (int k = order_; k >= 0; --k) acc = acc * z + c_[k];
    return acc;
}

TruncSeries1 TruncSeries1::derivative() const {
    TruncSeries1 s(std::max(order_ - 1, 0));
    for (int k = 1; k <= order_; ++k)
        if (k - 1 <= s.order_) s.c_[k - 1] = c_[k] * double(k);
    return s;
}

TruncSeries1 TruncSeries1::antiderivative() const {
    TruncSeries1 s(order_ + 1);
    for (int k = 0; k <= order_; ++k) s.c_[k + 1] = c_[k] / double(k + 1);
    return s;
}

TruncSeries1 operator+(const TruncSeries1& a, const TruncSeries1& b) {
    if (a.order_ != b.order_) throw OrderMismatch("series order mismatch in add");
    TruncSeries1 s(a.order_);
    for (int k = 0; k <= a.order_; ++k) s.c_[k] = a.c_[k] + b.c_[k];
    return s;
}

TruncSeries1 operator-(const TruncSeries1& a, const TruncSeries1& b) {
    if (a.order_ != b.order_) throw OrderMismatch("series order mismatch in sub");
    TruncSeries1 s(a.order_);
    for (int k = 0; k <= a.order_; ++k) s.c_[k] = a.c_[k] - b.c_[k];
    return s;
}

TruncSeries1 operator*(const TruncSeries1& a, const TruncSeries1& b) {
    if (a.order_ != b.order_) throw OrderMismatch("series order mismatch in mul");
    TruncSeries1 s(a.order_);
    for (int i = 0; i <= a.order_; ++i) {
        if (a.c_[i] == Cplx(0)) continue;
        for (int j = 0; i + j <= a.order_; ++j) s.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return s;
}

TruncSeries1 TruncSeries1::scale(Cplx s) const {
    check_finite(s);
    TruncSeries1 r(order_);
    for (int k = 0; k <= order_; ++k) r.c_[k] = c_[k] * s;
    return r;
}

TruncSeries1 compose(const TruncSeries1& f, const TruncSeries1& g, double eps) {
    if (std::abs(g.at(0)) > abs_floor(eps, g.max_abs()))
        throw std::invalid_argument("compose: inner series has nonzero constant term");
    int n = f.order();
    TruncSeries1 acc = TruncSeries1::zero(n);
    TruncSeries1 gn = g.with_order(n);
    for (int k = n; k >= 0; --k) {
        acc = acc * gn;
        acc.set(0, acc.at(0) + f.at(k));
    }
    return acc;
}

TruncSeries1 invert_unit1(const TruncSeries1& f, double eps) {
    Cplx c0 = f.at(0);
    if (std::abs(c0) <= abs_floor(eps, f.max_abs()))
        throw NotAUnit("invert_unit1: constant term vanishes");
    int n = f.order();
    TruncSeries1 w = f.scale(Cplx(1) / c0);
    w.set(0, Cplx(0)); // f/c0 = 1 + w
    TruncSeries1 acc = TruncSeries1::zero(n);
    for (int k = n; k >= 0; --k) {
        acc = acc * w.scale(Cplx(-1));
        acc.set(0, acc.at(0) + Cplx(1));
    }
    return acc.scale(Cplx(1) / c0);
}

// ---------------------------------------------------------------- JetDiffeo

JetDiffeo::JetDiffeo(TruncSeries1 s, double eps) : s_(std::move(s)) {
    if (s_.order() < 1) throw DegenerateJet("jet order must be >= 1");
    double floor = abs_floor(eps, s_.max_abs());
    if (std::abs(s_.at(0)) > floor)
        throw DegenerateJet("jet diffeo has nonzero constant term");
    if (std::abs(s_.at(1)) <= eps)
        throw DegenerateJet("jet diffeo has vanishing linear coefficient");
    s_.set(0, Cplx(0));
}

JetDiffeo JetDiffeo::identity(int order) { return linear(order, Cplx(1)); }

JetDiffeo JetDiffeo::linear(int order, Cplx multiplier) {
    TruncSeries1 s(order);
    s.set(1, multiplier);
    return JetDiffeo(std::move(s));
}

JetDiffeo compose1(const JetDiffeo& f, const JetDiffeo& g) {
    return JetDiffeo(compose(f.series(), g.series(), 0.0));
}

JetDiffeo inverse1(const JetDiffeo& f) {
    // solve f(g(z)) = z degree by degree
    int n = f.order();
    TruncSeries1 g(n);
    g.set(1, Cplx(1) / f.at(1));
    for (int k = 2; k <= n; ++k) {
        TruncSeries1 r = compose(f.series(), g, 0.0);
        g.set(k, -r.at(k) / f.at(1));
    }
    return JetDiffeo(std::move(g));
}

double jet_distance(const JetDiffeo& f, const JetDiffeo& g) {
    int n = std::min(f.order(), g.order());
    double m = 0;
    for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(f.at(k) - g.at(k)));
    return m;
}

// ---------------------------------------------------------------- TruncSeries2

TruncSeries2::TruncSeries2(int order) : order_(order), c_(tri_size(order)) {
    if (order < 0) throw std::invalid_argument("negative order");
}

std::size_t TruncSeries2::idx(int i, int j) const {
    int d = i + j;
    // coefficients grouped by total degree, then by j ascending
    return static_cast<std::size_t>(d) * (d + 1) / 2 + j;
}

TruncSeries2 TruncSeries2::constant(int order, Cplx v) {
    TruncSeries2 s(order);
    s.set(0, 0, v);
    return s;
}

TruncSeries2 TruncSeries2::monomial(int order, int i, int j, Cplx v) {
    TruncSeries2 s(order);
    s.set(i, j, v);
    return s;
}

Cplx TruncSeries2::at(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_) return Cplx(0);
    return c_[idx(i, j)];
}

void TruncSeries2::set(int i, int j, Cplx v) {
    check_finite(v);
    if (i < 0 || j < 0 || i + j > order_) throw std::out_of_range("coefficient index beyond order");
    c_[idx(i, j)] = v;
}

TruncSeries2 TruncSeries2::with_order(int n) const {
    TruncSeries2 s(n);
    int top = std::min(n, order_);
    for (int d = 0; d <= top; ++d)
        for (int j = 0; j <= d; ++j) s.c_[s.idx(d - j, j)] = c_[idx(d - j, j)];
    return s;
}

int TruncSeries2::valuation(double eps) const {
    double floor = abs_floor(eps, max_abs());
    for (int d = 0; d <= order_; ++d)
        for (int j = 0; j <= d; ++j)
            if (std::abs(c_[idx(d - j, j)]) > floor) return d;
    return kValInfinity;
}

double TruncSeries2::max_abs() const {
    double m = 0;
    for (Cplx v : c_) m = std::max(m, std::abs(v));
    return m;
}

Cplx TruncSeries2::eval(Cplx x, Cplx y) const {
    // Horner in x with inner Horner in y over the triangle
    Cplx acc(0);
    for (int i = order_; i >= 0; --i) {
        Cplx row(0);
        for (int j = order_ - i; j >= 0; --j) row = row * y + at(i, j);
        acc = acc * x + row;
    }
    return acc;
}

TruncSeries2 TruncSeries2::dx() const {
    TruncSeries2 s(std::max(order_ - 1, 0));
    for (int i = 1; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j)
            if (i - 1 + j <= s.order_) s.set(i - 1, j, at(i, j) * double(i));
    return s;
}

TruncSeries2 TruncSeries2::dy() const {
    TruncSeries2 s(std::max(order_ - 1, 0));
    for (int i = 0; i <= order_; ++i)
        for (int j = 1; i + j <= order_; ++j)
            if (i + j - 1 <= s.order_) s.set(i, j - 1, at(i, j) * double(j));
    return s;
}

TruncSeries2 TruncSeries2::shift(int di, int dj) const {
    TruncSeries2 s(order_ + di + dj);
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) s.set(i + di, j + dj, at(i, j));
    return s;
}

int TruncSeries2::x_multiplicity(double eps) const {
    double floor = abs_floor(eps, max_abs());
    int m = order_ + 1;
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j)
            if (std::abs(at(i, j)) > floor) { m = std::min(m, i); break; }
    return m;
}

int TruncSeries2::y_multiplicity(double eps) const {
    return swap_xy().x_multiplicity(eps);
}

TruncSeries2 TruncSeries2::unshift_x(int k, double eps) const {
    if (k == 0) return *this;
    double floor = abs_floor(eps, max_abs());
    TruncSeries2 s(std::max(order_ - k, 0));
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) {
            Cplx v = at(i, j);
            if (i < k) {
                if (std::abs(v) > floor)
                    throw std::domain_error("unshift_x: series not divisible by x^k");
                continue;
            }
            if (i - k + j <= s.order_) s.set(i - k, j, v);
        }
    return s;
}

TruncSeries2 TruncSeries2::unshift_y(int k, double eps) const {
    return swap_xy().unshift_x(k, eps).swap_xy();
}

TruncSeries2 TruncSeries2::translate(Cplx px, Cplx py) const {
    // expand (x+px)^i (y+py)^j with binomial tables
    int n = order_;
    std::vector<std::vector<Cplx>> xpow(n + 1), ypow(n + 1);
    for (int i = 0; i <= n; ++i) {
        // (x+px)^i coefficients in x
        xpow[i].assign(i + 1, Cplx(0));
        ypow[i].assign(i + 1, Cplx(0));
        if (i == 0) { xpow[i][0] = Cplx(1); ypow[i][0] = Cplx(1); continue; }
        for (int k = 0; k <= i; ++k) {
            xpow[i][k] = (k == 0) ? xpow[i - 1][0] * px : xpow[i - 1][k - 1] + (k <= i - 1 ? xpow[i - 1][k] * px : Cplx(0));
            ypow[i][k] = (k == 0) ? ypow[i - 1][0] * py : ypow[i - 1][k - 1] + (k <= i - 1 ? ypow[i - 1][k] * py : Cplx(0));
        }
    }
    TruncSeries2 s(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            Cplx v = at(i, j);
            if (v == Cplx(0)) continue;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b)
                    s.c_[s.idx(a, b)] += v * xpow[i][a] * ypow[j][b];
        }
    return s;
}

TruncSeries2 TruncSeries2::swap_xy() const {
    TruncSeries2 s(order_);
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) s.c_[s.idx(j, i)] = at(i, j);
    return s;
}

TruncSeries2 operator+(const TruncSeries2& a, const TruncSeries2& b) {
    if (a.order_ != b.order_) throw OrderMismatch("series order mismatch in add");
    TruncSeries2 s(a.order_);
    for (std::size_t k = 0; k < s.c_.size(); ++k) s.c_[k] = a.c_[k] + b.c_[k];
    return s;
}

TruncSeries2 operator-(const TruncSeries2& a, const TruncSeries2& b) {
    if (a.order_ != b.order_) throw OrderMismatch("series order mismatch in sub");
    TruncSeries2 s(a.order_);
    for (std::size_t k = 0; k < s.c_.size(); ++k) s.c_[k] = a.c_[k] - b.c_[k];
    return s;
}

TruncSeries2 operator*(const TruncSeries2& a, const TruncSeries2& b) {
    if (a.order_ != b.order_) throw OrderMismatch("series order mismatch in mul");
    TruncSeries2 s(a.order_);
    int n = a.order_;
    for (int i1 = 0; i1 <= n; ++i1)
        for (int j1 = 0; i1 + j1 <= n; ++j1) {
            Cplx v = a.at(i1, j1);
            if (v == Cplx(0)) continue;
            for (int i2 = 0; i1 + j1 + i2 <= n; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= n; ++j2) {
                    Cplx w = b.at(i2, j2);
                    if (w == Cplx(0)) continue;
                    s.c_[s.idx(i1 + i2, j1 + j2)] += v * w;
                }
        }
    return s;
}

TruncSeries2 TruncSeries2::scale(Cplx s) const {
    check_finite(s);
    TruncSeries2 r(order_);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] * s;
    return r;
}

TruncSeries2 TruncSeries2::mul_exact(const TruncSeries2& rhs) const {
    TruncSeries2 s(order_ + rhs.order_);
    for (int i1 = 0; i1 <= order_; ++i1)
        for (int j1 = 0; i1 + j1 <= order_; ++j1) {
            Cplx v = at(i1, j1);
            if (v == Cplx(0)) continue;
            for (int i2 = 0; i2 <= rhs.order_; ++i2)
                for (int j2 = 0; i2 + j2 <= rhs.order_; ++j2) {
                    Cplx w = rhs.at(i2, j2);
                    if (w == Cplx(0)) continue;
                    s.c_[s.idx(i1 + i2, j1 + j2)] += v * w;
                }
        }
    return s;
}

TruncSeries2 TruncSeries2::homogeneous_part(int k) const {
    TruncSeries2 s(order_);
    if (k < 0 || k > order_) return s;
    for (int j = 0; j <= k; ++j) s.set(k - j, j, at(k - j, j));
    return s;
}

TruncSeries2 add(const TruncSeries2& s, const TruncSeries2& t) { return s + t; }
TruncSeries2 mul(const TruncSeries2& s, const TruncSeries2& t) { return s * t; }

TruncSeries2 compose2(const TruncSeries2& s, const TruncSeries2& u, const TruncSeries2& v,
                      double eps) {
    if (std::abs(u.at(0, 0)) > abs_floor(eps, u.max_abs()) ||
        std::abs(v.at(0, 0)) > abs_floor(eps, v.max_abs()))
        throw std::invalid_argument("compose2: substituted series must vanish at the origin");
    int n = s.order();
    TruncSeries2 un = u.with_order(n), vn = v.with_order(n);
    // powers of u and v up to n
    std::vector<TruncSeries2> upow(n + 1, TruncSeries2::constant(n, Cplx(1)));
    std::vector<TruncSeries2> vpow(n + 1, TruncSeries2::constant(n, Cplx(1)));
    for (int k = 1; k <= n; ++k) {
        upow[k] = upow[k - 1] * un;
        vpow[k] = vpow[k - 1] * vn;
    }
    TruncSeries2 acc(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            Cplx cij = s.at(i, j);
            if (cij == Cplx(0)) continue;
            acc = acc + (upow[i] * vpow[j]).scale(cij);
        }
    return acc;
}

TruncSeries2 invert_unit(const TruncSeries2& s, double eps) {
    Cplx c0 = s.at(0, 0);
    if (std::abs(c0) <= abs_floor(eps, s.max_abs()))
        throw NotAUnit("invert_unit: constant term vanishes");
    int n = s.order();
    TruncSeries2 w = s.scale(Cplx(1) / c0);
    w.set(0, 0, Cplx(0));
    TruncSeries2 acc = TruncSeries2::zero(n);
    for (int k = n; k >= 0; --k) {
        acc = acc * w.scale(Cplx(-1));
        acc.set(0, 0, acc.at(0, 0) + Cplx(1));
    }
    return acc.scale(Cplx(1) / c0);
}

DivisionResult divide_with_remainder(const TruncSeries2& s, const TruncSeries2& q, double eps) {
    int vq = q.valuation(eps);
    if (vq == kValInfinity) throw std::invalid_argument("divide_with_remainder: zero divisor");
    int n = s.order();
    TruncSeries2 quot(n);
    // leading form of q as dense vector over its layer
    Eigen::VectorXcd qlead(vq + 1);
    for (int j = 0; j <= vq; ++j) qlead(j) = q.at(vq - j, j);

    double sscale = std::max(1.0, s.max_abs());
    int rem_val = n + 1;
    // layers below the divisor valuation cannot be reduced at all
    for (int d = 0; d < vq && d <= n && rem_val == n + 1; ++d)
        for (int j = 0; j <= d; ++j)
            if (std::abs(s.at(d - j, j)) > abs_floor(eps, sscale)) {
                rem_val = d;
                break;
            }
    if (rem_val <= n) return DivisionResult{quot, s, rem_val};
    for (int d = vq; d <= n; ++d) {
        // residual layer of degree d of s - quot*q, with quot known below degree d - vq
        TruncSeries2 partial = (quot * q.with_order(n)).homogeneous_part(d);
        Eigen::VectorXcd rhs(d + 1);
        for (int j = 0; j <= d; ++j) rhs(j) = s.at(d - j, j) - partial.at(d - j, j);
        // solve layer: unknown homogeneous part of degree d - vq of quot
        int m = d - vq;
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d + 1, m + 1);
        // (x^(m-k) y^k) * qlead contributes to monomials y^(k+j)
        for (int k = 0; k <= m; ++k)
            for (int j = 0; j <= vq; ++j) A(k + j, k) += qlead(j);
        Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(rhs);
        Eigen::VectorXcd resid = rhs - A * sol;
        for (int k = 0; k <= m; ++k) quot.set(m - k, k, sol(k));
        if (resid.lpNorm<Eigen::Infinity>() > abs_floor(eps, sscale)) {
            rem_val = d;
            break;
        }
    }
    TruncSeries2 rem = s - (quot * q.with_order(n));
    return DivisionResult{quot, rem, rem_val};
}

TruncSeries1 restrict_to_curve(const TruncSeries2& f, const TruncSeries1& cx,
                               const TruncSeries1& cy, double eps) {
    if (std::abs(cx.at(0)) > abs_floor(eps, cx.max_abs()) ||
        std::abs(cy.at(0)) > abs_floor(eps, cy.max_abs()))
        throw std::invalid_argument("restrict_to_curve: parametrization must start at the origin");
    int n = std::max(f.order(), std::max(cx.order(), cy.order()));
    TruncSeries1 X = cx.with_order(n), Y = cy.with_order(n);
    std::vector<TruncSeries1> xp(f.order() + 1, TruncSeries1::constant(n, Cplx(1)));
    std::vector<TruncSeries1> yp(f.order() + 1, TruncSeries1::constant(n, Cplx(1)));
    for (int k = 1; k <= f.order(); ++k) {
        xp[k] = xp[k - 1] * X;
        yp[k] = yp[k - 1] * Y;
    }
    TruncSeries1 acc = TruncSeries1::zero(n);
    for (int i = 0; i <= f.order(); ++i)
        for (int j = 0; i + j <= f.order(); ++j) {
            Cplx c = f.at(i, j);
            if (c == Cplx(0)) continue;
            acc = acc + (xp[i] * yp[j]).scale(c);
        }
    return acc;
}

} // namespace folab
