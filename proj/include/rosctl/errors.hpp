#pragma once

#include <stdexcept>
#include <string>

namespace rosctl {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inconsistent or malformed configuration (grid mismatch, bad sizes, unknown keys).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested work exceeds a deliberate resource cap.
class ResourceLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// A computed equilibrium or gain violates the admissibility (stability) constraint,
// or no admissible solution exists.
class InadmissibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ODE solution left the certified region (blow-up or sign change).
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Simulated state exceeded the overflow guard.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical evaluation impossible at the requested point (e.g. stencil leaves the domain).
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double min_offset)
        : std::runtime_error(what), min_offset_(min_offset) {}
    double min_offset() const noexcept { return min_offset_; }

private:
    double min_offset_;
};

}  // namespace rosctl
