#pragma once

#include <cstdint>
#include <string>

namespace folab {

// Global knobs shared across the pipeline. Immutable once built; passed by
// value or const reference, never stored as mutable global state.
struct Config {
    int jet_order = 12;        // default truncation order N
    double eps_zero = 1e-10;   // zero threshold for series coefficients
    double ode_tol = 1e-12;    // per-step tolerance for path lifting
    long q_max = 1000000;      // denominator bound for the rationality test
    std::uint64_t seed = 1;    // RNG seed (combine_fibrations draws)
    int max_depth = 20;        // blow-up depth cap

    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);
    std::string to_text() const;
};

} // namespace folab
