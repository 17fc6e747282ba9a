// errors.hpp
//
// Exception types shared by all phaseflow modules.
#pragma once

#include <stdexcept>
#include <string>

namespace phaseflow {

/// Base class for all library failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite-difference evaluation produced a non-finite value.
class DifferentiationError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// A formula with a pole was evaluated at (nearly) coincident arguments.
class PoleError : public Error {
public:
    using Error::Error;
};

/// A condition that needs more indices/phases than the system has.
class VacuousConditionError : public Error {
public:
    using Error::Error;
};

/// Evaluation outside the model's admissible domain (e.g. V <= nb).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The entropy gradient vanished where the Lax relation divides by it.
class DegenerateEntropyError : public Error {
public:
    using Error::Error;
};

/// split_phase parts do not compose back to the original order parameter.
class CompositionMismatchError : public Error {
public:
    using Error::Error;
};

/// A quadrature integrand turned out to depend on foreign variables.
class PathDependenceError : public Error {
public:
    using Error::Error;
};

/// Denominator cofactor vanished along an integration segment.
class CofactorSingularityError : public Error {
public:
    using Error::Error;
};

/// Candidate symmetry field fails the commutation condition.
class SymmetryMismatchError : public Error {
public:
    using Error::Error;
};

/// Continuation started from a point that is not a root.
class BadSeedError : public Error {
public:
    using Error::Error;
};

/// A solved grid jumps between solution branches.
class MixedBranchError : public Error {
public:
    using Error::Error;
};

/// Root scan found more roots than the caller allowed.
class RootOverflowError : public Error {
public:
    using Error::Error;
};

/// Two isotherms at the same temperature cannot be separated.
class DegenerateIsothermsError : public Error {
public:
    using Error::Error;
};

/// The two isotherms coincide at a reconstruction grid node.
class SingularNodeError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (CSV tables, expression strings).
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace phaseflow
