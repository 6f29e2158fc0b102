#pragma once

#include <cstddef>
#include <vector>

#include "lossfit/rng.hpp"

namespace lossfit {

/// Shifted lognormal ground-up loss W: log(W - w0) ~ N(theta, sigma^2).
struct GroundUpModel {
    double w0 = 0.0;
    double theta = 0.0;
    double sigma = 1.0;
};

enum class PaymentKind { Y, Z };

/// Policy constants and the derived log-scale thresholds
/// t = log(d-w0), T = log(u-w0), R = T-t.
struct PolicyFrame {
    double d, u, c, w0;
    double t, T, R;

    double gamma(const GroundUpModel& m) const { return (t - m.theta) / m.sigma; }
    double xi(const GroundUpModel& m) const { return gamma(m) + R / m.sigma; }
    /// Cap of the log-scale payment, c*R.
    double cap() const { return c * R; }
    /// Cap of the raw payment, c*(u-d).
    double raw_cap() const { return c * (u - d); }
};

/// Validates w0 < d < u, c > 0 and computes the log-scale constants.
PolicyFrame frame(double d, double u, double c, double w0);

/// Log-scale payments with censoring tallies. For kind Y all values lie in
/// (0, cR] and n0 = 0; for kind Z in [0, cR]. n0 + n1 + n2 = values.size().
struct PaymentSample {
    PaymentKind kind = PaymentKind::Y;
    std::vector<double> values;
    std::size_t n0 = 0;  // zeros (Z only)
    std::size_t n1 = 0;  // exact, strictly inside (0, cR)
    std::size_t n2 = 0;  // at the cap cR

    std::size_t size() const { return values.size(); }
};

/// Maps raw payments v -> c*log(v/(c(d-w0)) + 1) and tallies n0/n1/n2.
/// Raw values within 1e-9 relative of the cap c(u-d) are classified as
/// censored and mapped to exactly cR (cap detection happens before logs).
PaymentSample to_log_scale(const std::vector<double>& raw_payments,
                           const PolicyFrame& frame, PaymentKind kind);

/// Inverse of the log-scale transform: y -> c(d-w0)(e^{y/c} - 1).
double from_log_scale(double value, const PolicyFrame& frame);

/// Density of the log-scale payment Y on (0,cR); returns the point mass at
/// y == cR and 0 elsewhere.
double pdf_y(double y, const PolicyFrame& frame, const GroundUpModel& model);

/// Density/mass of the log-scale payment Z: mass at 0, density on (0,cR),
/// mass at cR.
double pdf_z(double z, const PolicyFrame& frame, const GroundUpModel& model);

/// Parametric s* = (Phi(xi)-Phi(gamma))/(1-Phi(gamma)): probability that a
/// payment-Y observation is exact.
double s_star(const PolicyFrame& frame, const GroundUpModel& model);

/// Empirical s* = n1/n of a payment-Y sample.
double s_star(const PaymentSample& sample);

/// Inverse-transform sampling of n payments. Kind Y draws X from the law
/// conditional on X > t; kind Z censors both sides. Reproducible under a
/// fixed (seed, stream).
PaymentSample sample_payments(const PolicyFrame& frame, const GroundUpModel& model,
                              std::size_t n, PaymentKind kind, SeededRng& rng);

}  // namespace lossfit
