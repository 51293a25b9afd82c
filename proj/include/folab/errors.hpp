#pragma once

#include <stdexcept>
#include <string>

namespace folab {

struct NotAUnit : std::domain_error {
    explicit NotAUnit(const std::string& msg) : std::domain_error(msg) {}
};

struct OrderMismatch : std::invalid_argument {
    explicit OrderMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

struct DegenerateJet : std::domain_error {
    explicit DegenerateJet(const std::string& msg) : std::domain_error(msg) {}
};

struct NonIsolatedSingularity : std::domain_error {
    explicit NonIsolatedSingularity(const std::string& msg) : std::domain_error(msg) {}
};

struct MaxDepthExceeded : std::runtime_error {
    explicit MaxDepthExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct StepCollapse : std::runtime_error {
    explicit StepCollapse(const std::string& msg) : std::runtime_error(msg) {}
};

struct ToleranceNotMet : std::runtime_error {
    explicit ToleranceNotMet(const std::string& msg) : std::runtime_error(msg) {}
};

struct JetInconsistent : std::runtime_error {
    explicit JetInconsistent(const std::string& msg) : std::runtime_error(msg) {}
};

struct TransversalityFailure : std::runtime_error {
    explicit TransversalityFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct SmallDivisor : std::runtime_error {
    int power;
    double magnitude;
    SmallDivisor(int j, double mag, const std::string& msg)
        : std::runtime_error(msg), power(j), magnitude(mag) {}
};

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int ln, int col, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
          line(ln), column(col) {}
};

} // namespace folab
