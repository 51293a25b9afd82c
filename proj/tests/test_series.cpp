#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "folab/series.hpp"

using namespace folab;

namespace {

constexpr double kEps = 1e-10;

TruncSeries2 random_series2(std::mt19937_64& rng, int order, bool unit = false) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    TruncSeries2 s(order);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) s.set(i, j, Cplx(d(rng), d(rng)));
    if (unit && std::abs(s.at(0, 0)) < 0.3) s.set(0, 0, Cplx(1.0, 0.2));
    return s;
}

JetDiffeo random_jet(std::mt19937_64& rng, int order) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    TruncSeries1 s(order);
    for (int k = 2; k <= order; ++k) s.set(k, Cplx(d(rng), d(rng)));
    s.set(1, Cplx(1.0 + 0.3 * d(rng), 0.5 * d(rng)));
    return JetDiffeo(std::move(s));
}

double max_coeff_diff(const TruncSeries2& a, const TruncSeries2& b) {
    int n = std::min(a.order(), b.order());
    double m = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
    return m;
}

} // namespace

TEST_CASE("ring operations on simple polynomials") {
    int n = 4;
    TruncSeries2 x = TruncSeries2::var_x(n), y = TruncSeries2::var_y(n);
    TruncSeries2 p = (x + y) * (x - y);
    CHECK(p.at(2, 0) == Cplx(1));
    CHECK(p.at(0, 2) == Cplx(-1));
    CHECK(p.at(1, 1) == Cplx(0));

    std::mt19937_64 rng(7);
    TruncSeries2 s = random_series2(rng, n);
    TruncSeries2 z = s * TruncSeries2::zero(n);
    CHECK(z.max_abs() == 0.0);

    // (1+x) * (1 - x + x^2 - x^3 + ...) == 1
    TruncSeries2 one_plus_x = TruncSeries2::constant(n, Cplx(1)) + x;
    TruncSeries2 geo(n);
    for (int k = 0; k <= n; ++k) geo.set(k, 0, Cplx(k % 2 == 0 ? 1 : -1));
    TruncSeries2 prod = one_plus_x * geo;
    CHECK(prod.at(0, 0) == Cplx(1));
    for (int k = 1; k <= n; ++k) CHECK(std::abs(prod.at(k, 0)) == 0.0);
}

TEST_CASE("order mismatch is rejected") {
    TruncSeries2 a(3), b(4);
    CHECK_THROWS_AS(a + b, OrderMismatch);
    CHECK_THROWS_AS(a * b, OrderMismatch);
}

TEST_CASE("invert_unit") {
    int n = 6;
    TruncSeries2 one = TruncSeries2::constant(n, Cplx(1));
    CHECK(max_coeff_diff(invert_unit(one, kEps), one) == 0.0);

    CHECK(invert_unit(TruncSeries2::constant(n, Cplx(2)), kEps).at(0, 0) == Cplx(0.5));

    TruncSeries2 s = one + TruncSeries2::var_x(n) + TruncSeries2::var_y(n);
    TruncSeries2 inv = invert_unit(s, kEps);
    // 1 - (x+y) + (x+y)^2 - ...
    TruncSeries2 expected(n);
    TruncSeries2 xy = TruncSeries2::var_x(n) + TruncSeries2::var_y(n);
    TruncSeries2 pw = one;
    for (int k = 0; k <= n; ++k) {
        expected = expected + pw.scale(Cplx(k % 2 == 0 ? 1 : -1));
        pw = pw * xy;
    }
    CHECK(max_coeff_diff(inv, expected) < 1e-14);
    CHECK(max_coeff_diff(s * inv, one) < 1e-14);

    CHECK_THROWS_AS(invert_unit(TruncSeries2::var_x(n), kEps), NotAUnit);
}

TEST_CASE("compose2 substitutions") {
    int n = 6;
    TruncSeries2 x = TruncSeries2::var_x(n), y = TruncSeries2::var_y(n);
    // s = x + y with u = x^2, v = y^2
    TruncSeries2 r = compose2(x + y, x * x, y * y, kEps);
    CHECK(max_coeff_diff(r, x * x + y * y) == 0.0);

    std::mt19937_64 rng(11);
    TruncSeries2 s = random_series2(rng, n);
    CHECK(max_coeff_diff(compose2(s, x, y, kEps), s) == 0.0);

    TruncSeries2 q = compose2(x * y, x + y, x - y, kEps);
    CHECK(max_coeff_diff(q, x * x - y * y) < 1e-15);

    CHECK_THROWS(compose2(s, TruncSeries2::constant(n, Cplx(1)), y, kEps));
}

TEST_CASE("compose1 and inverse1") {
    int n = 8;
    JetDiffeo id = JetDiffeo::identity(n);
    CHECK(jet_distance(inverse1(id), id) == 0.0);

    JetDiffeo two = JetDiffeo::linear(n, Cplx(2));
    CHECK(inverse1(two).at(1) == Cplx(0.5));

    // f = z + z^2: compositional inverse has Catalan-number coefficients
    TruncSeries1 f(n);
    f.set(1, Cplx(1));
    f.set(2, Cplx(1));
    JetDiffeo jf(f);
    JetDiffeo g = inverse1(jf);
    CHECK(std::abs(g.at(1) - Cplx(1)) < 1e-13);
    CHECK(std::abs(g.at(2) - Cplx(-1)) < 1e-13);
    CHECK(std::abs(g.at(3) - Cplx(2)) < 1e-13);
    CHECK(std::abs(g.at(4) - Cplx(-5)) < 1e-13);
    CHECK(std::abs(g.at(5) - Cplx(14)) < 1e-13);
    // round-trip residual
    CHECK(jet_distance(compose1(jf, g), JetDiffeo::identity(n)) < 1e-12);
    CHECK(jet_distance(compose1(g, jf), JetDiffeo::identity(n)) < 1e-12);
}

TEST_CASE("inverse1 is an antihomomorphism (property)") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        JetDiffeo f = random_jet(rng, 8);
        JetDiffeo g = random_jet(rng, 8);
        JetDiffeo lhs = inverse1(compose1(f, g));
        JetDiffeo rhs = compose1(inverse1(g), inverse1(f));
        CHECK(jet_distance(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("ring axioms on random truncated series (property)") {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 20; ++rep) {
        TruncSeries2 a = random_series2(rng, 6);
        TruncSeries2 b = random_series2(rng, 6);
        TruncSeries2 c = random_series2(rng, 6);
        CHECK(max_coeff_diff((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(max_coeff_diff(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(max_coeff_diff(a * b, b * a) < 1e-12);
    }
}

TEST_CASE("divide_with_remainder") {
    int n = 8;
    std::mt19937_64 rng(41);
    TruncSeries2 q = random_series2(rng, n);
    q.set(0, 0, Cplx(0)); // give q a positive valuation

    SUBCASE("s = q gives quotient 1") {
        DivisionResult r = divide_with_remainder(q, q, kEps);
        CHECK(std::abs(r.quotient.at(0, 0) - Cplx(1)) < 1e-10);
        CHECK(r.remainder_valuation == n + 1);
    }

    SUBCASE("s = x*q + high-order tail") {
        TruncSeries2 s = TruncSeries2::var_x(n) * q;
        DivisionResult r = divide_with_remainder(s, q, kEps);
        CHECK(r.remainder_valuation == n + 1);
        CHECK(std::abs(r.quotient.at(1, 0) - Cplx(1)) < 1e-9);
    }

    SUBCASE("exact product") {
        int m = 6;
        TruncSeries2 x = TruncSeries2::var_x(m), y = TruncSeries2::var_y(m);
        TruncSeries2 u = x * x + x * y;
        TruncSeries2 d = x - y;
        DivisionResult r = divide_with_remainder(u * d, d, kEps);
        CHECK(r.remainder_valuation == m + 1);
        CHECK(max_coeff_diff(r.quotient, u) < 1e-12);
    }

    SUBCASE("non-divisible input reports the obstruction degree") {
        int m = 6;
        TruncSeries2 x = TruncSeries2::var_x(m), y = TruncSeries2::var_y(m);
        DivisionResult r = divide_with_remainder(y * y, x, kEps);
        CHECK(r.remainder_valuation == 2);
    }

    SUBCASE("round-trip s = u*q + r with reported valuation") {
        for (int rep = 0; rep < 10; ++rep) {
            TruncSeries2 s = random_series2(rng, n);
            DivisionResult r = divide_with_remainder(s, q, kEps);
            TruncSeries2 recon = r.quotient * q + r.remainder;
            CHECK(max_coeff_diff(recon, s) < 1e-9);
            if (r.remainder_valuation <= n)
                CHECK(r.remainder.valuation(1e-9) == r.remainder_valuation);
        }
    }

    CHECK_THROWS(divide_with_remainder(q, TruncSeries2::zero(n), kEps));
}

TEST_CASE("translate and restrict helpers") {
    int n = 5;
    std::mt19937_64 rng(51);
    TruncSeries2 s = random_series2(rng, n);
    TruncSeries2 t = s.translate(Cplx(0.3, -0.1), Cplx(-0.2, 0.4));
    CHECK(std::abs(t.eval(Cplx(0.1), Cplx(0.05)) -
                   s.eval(Cplx(0.1) + Cplx(0.3, -0.1), Cplx(0.05) + Cplx(-0.2, 0.4))) < 1e-12);

    // restriction of x^2 - y to the curve (s, s^2) vanishes identically
    TruncSeries2 f = TruncSeries2::var_x(4) * TruncSeries2::var_x(4) - TruncSeries2::var_y(4);
    TruncSeries1 par = TruncSeries1::identity(6);
    TruncSeries1 par2(6);
    par2.set(2, Cplx(1));
    TruncSeries1 rr = restrict_to_curve(f, par, par2, kEps);
    CHECK(rr.max_abs() < 1e-14);
}

TEST_CASE("jet diffeo validation") {
    TruncSeries1 bad(4);
    bad.set(0, Cplx(1));
    bad.set(1, Cplx(1));
    CHECK_THROWS_AS(JetDiffeo{bad}, DegenerateJet);
    TruncSeries1 flat(4);
    CHECK_THROWS_AS(JetDiffeo{flat}, DegenerateJet);
}
