#include "folab/ode.hpp"

#include <cmath>

#include "folab/oneform.hpp"

namespace folab {

Path Path::segment(Cplx from, Cplx to) {
    return Path{[=](double t) { return from + (to - from) * t; },
                [=](double) { return to - from; }};
}

Path Path::circle(Cplx center, Cplx base, double turns) {
    Cplx r0 = base - center;
    const double two_pi = 6.283185307179586476925286766559;
    return Path{[=](double t) { return center + r0 * std::polar(1.0, two_pi * turns * t); },
                [=](double t) {
                    return r0 * std::polar(1.0, two_pi * turns * t) * Cplx(0, two_pi * turns);
                }};
}

namespace {

// Fehlberg RK7(8), 13 stages
constexpr int kStages = 13;
const double kA[kStages] = {0,       2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12, 0.5, 5.0 / 6,
                            1.0 / 6, 2.0 / 3,  1.0 / 3, 1.0,     0.0,      1.0};
const double kB[kStages][kStages] = {
    {},
    {2.0 / 27},
    {1.0 / 36, 1.0 / 12},
    {1.0 / 24, 0, 1.0 / 8},
    {5.0 / 12, 0, -25.0 / 16, 25.0 / 16},
    {1.0 / 20, 0, 0, 1.0 / 4, 1.0 / 5},
    {-25.0 / 108, 0, 0, 125.0 / 108, -65.0 / 27, 125.0 / 54},
    {31.0 / 300, 0, 0, 0, 61.0 / 225, -2.0 / 9, 13.0 / 900},
    {2.0, 0, 0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0},
    {-91.0 / 108, 0, 0, 23.0 / 108, -976.0 / 135, 311.0 / 54, -19.0 / 60, 17.0 / 6, -1.0 / 12},
    {2383.0 / 4100, 0, 0, -341.0 / 164, 4496.0 / 1025, -301.0 / 82, 2133.0 / 4100, 45.0 / 82,
     45.0 / 164, 18.0 / 41},
    {3.0 / 205, 0, 0, 0, 0, -6.0 / 41, -3.0 / 205, -3.0 / 41, 3.0 / 41, 6.0 / 41, 0},
    {-1777.0 / 4100, 0, 0, -341.0 / 164, 4496.0 / 1025, -289.0 / 82, 2193.0 / 4100, 51.0 / 82,
     33.0 / 164, 12.0 / 41, 0, 1.0},
};
const double kC8[kStages] = {0,          0, 0, 0, 0, 34.0 / 105, 9.0 / 35,   9.0 / 35,
                             9.0 / 280,  9.0 / 280, 0, 41.0 / 840, 41.0 / 840};

} // namespace

OdeResult integrate_ode(const std::function<Cplx(double, Cplx)>& f, Cplx y0, double tol,
                        const std::function<bool(Cplx)>& escape) {
    double t = 0;
    Cplx y = y0;
    double h = 0.05;
    double err_acc = 0;
    int steps = 0, rejected = 0;
    const int max_steps = 200000;

    while (t < 1.0) {
        if (steps + rejected > max_steps)
            throw ToleranceNotMet("integrate_ode: step budget exhausted");
        h = std::min(h, 1.0 - t);
        Cplx k[kStages];
        k[0] = f(t, y);
        for (int s = 1; s < kStages; ++s) {
            Cplx acc(0);
            for (int j = 0; j < s; ++j)
                if (kB[s][j] != 0.0) acc += kB[s][j] * k[j];
            k[s] = f(t + kA[s] * h, y + h * acc);
        }
        Cplx y8(0);
        for (int s = 0; s < kStages; ++s)
            if (kC8[s] != 0.0) y8 += kC8[s] * k[s];
        y8 = y + h * y8;
        // embedded error estimate
        Cplx ediff = k[0] + k[10] - k[11] - k[12];
        double err = std::abs(h) * std::abs(ediff) * (41.0 / 840.0);
        double sc = tol * (1.0 + std::abs(y));
        if (err <= sc) {
            t += h;
            y = y8;
            err_acc += err;
            ++steps;
            if (escape && escape(y))
                throw StepCollapse("integrate_ode: solution escaped the allowed region");
        } else {
            ++rejected;
        }
        double factor = (err > 0) ? 0.9 * std::pow(sc / err, 1.0 / 8.0) : 4.0;
        factor = std::clamp(factor, 0.2, 4.0);
        h *= factor;
        if (h < 1e-14)
            throw StepCollapse("integrate_ode: step size collapsed");
    }
    return OdeResult{y, err_acc, steps, rejected};
}

OdeResult lift_path(const OneForm& w, const Path& path, Cplx v0, double tol, double tube_radius) {
    double scale = std::max(w.a.max_abs(), w.b.max_abs());
    double bfloor = 1e-13 * std::max(1.0, scale);
    auto rhs = [&](double t, Cplx v) {
        Cplx u = path.pos(t);
        Cplx av = w.a.eval(u, v);
        Cplx bv = w.b.eval(u, v);
        if (std::abs(bv) < bfloor)
            throw StepCollapse("lift_path: dv-coefficient vanished on the path");
        return -(av / bv) * path.vel(t);
    };
    auto escape = [&](Cplx v) { return std::abs(v) > tube_radius; };
    return integrate_ode(rhs, v0, tol, escape);
}

} // namespace folab
