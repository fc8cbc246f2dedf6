#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eigensteer {

/// Numerical procedure failed to reach its accuracy target.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required coupling <B phi_j, phi_k> vanishes; carries the offending index.
class DegenerateCouplingError : public std::runtime_error {
public:
    DegenerateCouplingError(int j, int k, const std::string& what)
        : std::runtime_error(what), j_(j), k_(k) {}
    int j() const { return j_; }
    int k() const { return k_; }

private:
    int j_, k_;
};

/// Moment synthesis left residuals above tolerance; carries the residual vector.
class SynthesisError : public std::runtime_error {
public:
    SynthesisError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Series truncation too short for the requested tail tolerance.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive step size collapsed below the representable floor.
class StiffnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Query outside the domain of a control or trajectory.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The steering cascade expanded on two consecutive windows.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config file parse failure; carries the line number (1-based, 0 = n/a).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace eigensteer
