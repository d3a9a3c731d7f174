#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stablelab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function was handed data violating its documented contract
/// (wrong domain tag, bad precondition, out-of-range argument).
class ContractError : public Error {
public:
    using Error::Error;
};

class DomainError : public ContractError {
public:
    using ContractError::ContractError;
};

/// Real output requested from a spectrum that is not conjugate symmetric.
class SymmetryError : public Error {
public:
    using Error::Error;
};

class MultiplierSingularityError : public Error {
public:
    MultiplierSingularityError(double tau, double omega);
    double tau;
    double omega;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach tolerance; carries the residual history.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

/// lambda is below the threshold where the a priori bounds are available.
class PreconditionError : public ContractError {
public:
    PreconditionError(const std::string& what, double delta, double lambda0)
        : ContractError(what), delta(delta), lambda0(lambda0) {}
    double delta;
    double lambda0;
};

class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, std::size_t step) : Error(what), step(step) {}
    std::size_t step;
};

/// The experiment left the regime in which its estimate is meaningful.
class RegimeError : public Error {
public:
    using Error::Error;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace stablelab
