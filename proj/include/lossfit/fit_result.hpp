#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

namespace lossfit {

/// Symmetric 2x2 matrix (covariances of (theta_hat, sigma_hat)).
struct Matrix2 {
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;

    double det() const { return m11 * m22 - m12 * m12; }
    bool positive_definite() const { return m11 > 0.0 && det() > 0.0; }

    Matrix2 scaled(double k) const { return {k * m11, k * m12, k * m22}; }
};

enum class Estimator { MLE, MTM, MWM, LNPaI, LNGPD };

const char* estimator_name(Estimator e);

struct FitResult {
    Estimator estimator = Estimator::MLE;
    double theta_hat = 0.0;
    double sigma_hat = 0.0;
    /// Asymptotic covariance of (theta_hat, sigma_hat), already divided by n.
    /// Absent for MTM (its closed forms live outside this artifact).
    std::optional<Matrix2> cov;
    std::size_t iterations = 0;
    bool converged = false;
    /// Composite parameters, proportions used, NLL/AIC and similar extras.
    std::map<std::string, double> extras;
};

}  // namespace lossfit
