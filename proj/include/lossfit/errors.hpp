#pragma once

#include <stdexcept>
#include <string>

namespace lossfit {

// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Policy constants violate w0 < d < u or c > 0.
class InvalidPolicyError : public Error {
public:
    using Error::Error;
};

// A raw payment lies outside the admissible range; `index` names the offender.
class OutOfRangeError : public Error {
public:
    OutOfRangeError(const std::string& msg, std::size_t index)
        : Error(msg), index(index) {}
    std::size_t index;
};

// Quantile requested at probability 0 or 1 (or the delta argument collapsed there).
class UnboundedQuantileError : public Error {
public:
    using Error::Error;
};

// omega_pair called with gamma >= xi.
class DegenerateBandError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature ran out of subdivisions; carries the best estimate seen.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& msg, double best_estimate, double error_estimate)
        : Error(msg), best_estimate(best_estimate), error_estimate(error_estimate) {}
    double best_estimate;
    double error_estimate;
};

// Too few exact observations to estimate anything.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Root finder / optimizer failed; carries the last iterate for diagnosis.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double last_x0, double last_x1, double residual)
        : Error(msg), last_x0(last_x0), last_x1(last_x1), residual(residual) {}
    double last_x0;
    double last_x1;
    double residual;
};

// Fisher-information (or Jacobian denominator) not positive definite.
class SingularInformationError : public Error {
public:
    using Error::Error;
};

// Winsorizing/trimming proportions too small for the censored mass observed.
// min_a / min_b report the smallest admissible proportions (negative if unconstrained).
class InsufficientProportionError : public Error {
public:
    InsufficientProportionError(const std::string& msg, double min_a, double min_b)
        : Error(msg), min_a(min_a), min_b(min_b) {}
    double min_a;
    double min_b;
};

// Case II (payment Y) or Case 6 (payment Z) violated by the data/proportions.
class CaseViolationError : public Error {
public:
    CaseViolationError(const std::string& msg, double min_a, double min_b)
        : Error(msg), min_a(min_a), min_b(min_b) {}
    double min_a;
    double min_b;
};

// Composite splice threshold outside (d, u).
class InvalidThresholdError : public Error {
public:
    using Error::Error;
};

// adapt_proportions could not find admissible proportions.
class AdaptivityError : public Error {
public:
    using Error::Error;
};

}  // namespace lossfit
