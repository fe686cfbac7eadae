#pragma once

#include <stdexcept>
#include <string>

namespace kssim {

/// Argument outside the domain of a model function (e.g. negative density).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A spec or field that cannot be built as requested.
class ConstructionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scan that never reaches its termination predicate.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation called on the wrong branch of the bounded/unbounded motility dichotomy.
class BranchError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Explicit update produced a negative density.
class StepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared; the runner turns this into an Overflowed classification.
class OverflowSignal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kssim
