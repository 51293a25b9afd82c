#pragma once

#include <complex>
#include <vector>

#include "folab/errors.hpp"

namespace folab {

using Cplx = std::complex<double>;

constexpr int kValInfinity = 1 << 20; // valuation of the zero series

// Truncated univariate power series: coefficients c[0..order].
class TruncSeries1 {
public:
    TruncSeries1() : order_(0), c_(1) {}
    explicit TruncSeries1(int order);
    TruncSeries1(int order, std::vector<Cplx> coeffs);

    static TruncSeries1 zero(int order) { return TruncSeries1(order); }
    static TruncSeries1 constant(int order, Cplx v);
    static TruncSeries1 identity(int order); // z

    int order() const { return order_; }
    Cplx at(int k) const { return (k >= 0 && k <= order_) ? c_[k] : Cplx(0); }
    void set(int k, Cplx v);
    const std::vector<Cplx>& coeffs() const { return c_; }

    TruncSeries1 with_order(int n) const;
    int valuation(double eps) const;
    double max_abs() const;
    Cplx eval(Cplx z) const;

    TruncSeries1 derivative() const;     // order drops by one
    TruncSeries1 antiderivative() const; // order grows by one, constant 0

    friend TruncSeries1 operator+(const TruncSeries1&, const TruncSeries1&);
    friend TruncSeries1 operator-(const TruncSeries1&, const TruncSeries1&);
    friend TruncSeries1 operator*(const TruncSeries1&, const TruncSeries1&);
    TruncSeries1 scale(Cplx s) const;

private:
    int order_;
    std::vector<Cplx> c_;
};

// f(g(z)) truncated; requires g(0) = 0.
TruncSeries1 compose(const TruncSeries1& f, const TruncSeries1& g, double eps);
// 1/f truncated; requires |f(0)| > eps.
TruncSeries1 invert_unit1(const TruncSeries1& f, double eps);

// Germ of a diffeomorphism of (C,0): series with zero constant term and
// nonvanishing linear coefficient.
class JetDiffeo {
public:
    JetDiffeo() : s_(TruncSeries1::identity(1)) {}
    explicit JetDiffeo(TruncSeries1 s, double eps = 1e-10);
    static JetDiffeo identity(int order);
    static JetDiffeo linear(int order, Cplx multiplier);

    const TruncSeries1& series() const { return s_; }
    int order() const { return s_.order(); }
    Cplx multiplier() const { return s_.at(1); }
    Cplx at(int k) const { return s_.at(k); }
    Cplx eval(Cplx z) const { return s_.eval(z); }

private:
    TruncSeries1 s_;
};

JetDiffeo compose1(const JetDiffeo& f, const JetDiffeo& g);
JetDiffeo inverse1(const JetDiffeo& f);
// max |coefficient difference| through the common order
double jet_distance(const JetDiffeo& f, const JetDiffeo& g);

// Truncated bivariate power series: dense triangular array,
// coefficient of x^i y^j stored for i + j <= order.
class TruncSeries2 {
public:
    TruncSeries2() : order_(0), c_(1) {}
    explicit TruncSeries2(int order);

    static TruncSeries2 zero(int order) { return TruncSeries2(order); }
    static TruncSeries2 constant(int order, Cplx v);
    static TruncSeries2 monomial(int order, int i, int j, Cplx v);
    static TruncSeries2 var_x(int order) { return monomial(order, 1, 0, Cplx(1)); }
    static TruncSeries2 var_y(int order) { return monomial(order, 0, 1, Cplx(1)); }

    int order() const { return order_; }
    Cplx at(int i, int j) const;
    void set(int i, int j, Cplx v);

    TruncSeries2 with_order(int n) const; // truncate or zero-extend
    int valuation(double eps) const;      // kValInfinity for ~zero
    double max_abs() const;
    bool is_zero(double eps) const { return valuation(eps) == kValInfinity; }
    Cplx eval(Cplx x, Cplx y) const;

    TruncSeries2 dx() const; // d/dx, order drops by one
    TruncSeries2 dy() const;

    // multiply by x^i y^j, raising the order accordingly (exact)
    TruncSeries2 shift(int i, int j) const;
    // divide by x^k (or y^k); requires divisibility up to eps (relative)
    TruncSeries2 unshift_x(int k, double eps) const;
    TruncSeries2 unshift_y(int k, double eps) const;
    // largest k with x^k dividing the series (relative eps); 0 for zero series queries use valuation first
    int x_multiplicity(double eps) const;
    int y_multiplicity(double eps) const;

    // substitute x -> x + px, y -> y + py (exact binomial expansion)
    TruncSeries2 translate(Cplx px, Cplx py) const;
    // swap the roles of x and y
    TruncSeries2 swap_xy() const;

    // same-order ring operations
    friend TruncSeries2 operator+(const TruncSeries2&, const TruncSeries2&);
    friend TruncSeries2 operator-(const TruncSeries2&, const TruncSeries2&);
    friend TruncSeries2 operator*(const TruncSeries2&, const TruncSeries2&); // truncating
    TruncSeries2 scale(Cplx s) const;

    // exact product: order = sum of orders (polynomial arithmetic)
    TruncSeries2 mul_exact(const TruncSeries2& rhs) const;

    // homogeneous part of total degree k, as a series of the same order
    TruncSeries2 homogeneous_part(int k) const;

private:
    static std::size_t tri_size(int order) {
        return static_cast<std::size_t>(order + 1) * (order + 2) / 2;
    }
    std::size_t idx(int i, int j) const;
    int order_;
    std::vector<Cplx> c_; // c[idx(i,j)]
};

TruncSeries2 add(const TruncSeries2& s, const TruncSeries2& t);
TruncSeries2 mul(const TruncSeries2& s, const TruncSeries2& t);

// s(u(x,y), v(x,y)); u and v must have zero constant term.
TruncSeries2 compose2(const TruncSeries2& s, const TruncSeries2& u, const TruncSeries2& v,
                      double eps);

// 1/s truncated; requires |s(0,0)| > eps.
TruncSeries2 invert_unit(const TruncSeries2& s, double eps);

struct DivisionResult {
    TruncSeries2 quotient;
    TruncSeries2 remainder;
    int remainder_valuation; // order()+1 means divisible through truncation
};

// Greedy degreewise division: finds u minimizing the valuation at which
// s - u*q first fails to vanish. Division by the leading form of q is
// injective on each homogeneous layer, so the greedy quotient is the
// unique maximizer of the remainder valuation.
DivisionResult divide_with_remainder(const TruncSeries2& s, const TruncSeries2& q, double eps);

// univariate series in s obtained by substituting x = cx(s), y = cy(s); cx, cy zero at 0
TruncSeries1 restrict_to_curve(const TruncSeries2& f, const TruncSeries1& cx,
                               const TruncSeries1& cy, double eps);

} // namespace folab
