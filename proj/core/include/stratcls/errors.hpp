#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stratcls {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input file or value violates a documented schema/contract.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The causal graph contains a directed cycle. Carries one witness cycle.
class CycleDetected : public Error {
public:
    CycleDetected(const std::string& what, std::vector<std::size_t> cycle)
        : Error(what), cycle_(std::move(cycle)) {}
    const std::vector<std::size_t>& cycle() const { return cycle_; }

private:
    std::vector<std::size_t> cycle_;
};

/// An influence path of length >= 2 makes the affine Gaussian belief invalid.
class DepthExceeded : public Error {
public:
    using Error::Error;
};

class NotPsd : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class SingularCovariance : public Error {
public:
    using Error::Error;
};

/// The best-response program has an empty feasible set. Carries the
/// smallest failure tolerance that admits a solution, when known.
class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& what, double threshold_delta = -1.0)
        : Error(what), threshold_delta_(threshold_delta) {}
    double threshold_delta() const { return threshold_delta_; }

private:
    double threshold_delta_;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class IterationLimit : public Error {
public:
    using Error::Error;
};

class ZeroEffort : public Error {
public:
    using Error::Error;
};

class PartitionError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class UnknownClassifier : public Error {
public:
    using Error::Error;
};

}  // namespace stratcls
