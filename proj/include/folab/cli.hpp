#pragma once

#include <optional>
#include <string>

#include "folab/config.hpp"

namespace folab {

struct JobSpec {
    std::string command; // reduce | holonomy | sliding | compare | flows-check
    std::string input_path;
    std::optional<std::string> input2_path;
    std::optional<std::string> fibration_path;
    std::optional<std::string> fibration2_path;
    std::optional<int> order; // overrides config jet_order
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;

    void validate() const;
};

struct RunResult {
    std::string report_json; // serialized report document
    int exit_code;           // 0 ok, 2 verdict failure
};

// Executes the job and serializes the report (deterministic for fixed
// inputs + config). Writes to spec.out_path when set. Errors throw.
RunResult run(const JobSpec& job);

} // namespace folab
