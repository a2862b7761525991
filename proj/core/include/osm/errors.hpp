#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace osm {

/// Argument outside the mathematical domain of a routine (negative Bessel
/// argument, Green's function evaluated on its singularity, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Measurement/sampling geometry violates a precondition.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested evaluation would fall outside the accuracy envelope of the
/// quadrature (e.g. field point too close to the contrast support).
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> residual_history)
        : std::runtime_error(what), history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Malformed input file or document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested key (frequency, transmitter, suite name) is absent.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Not enough samples to produce a statistically meaningful estimate.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace osm
