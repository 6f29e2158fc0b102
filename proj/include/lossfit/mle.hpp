#pragma once

#include "lossfit/fit_result.hpp"
#include "lossfit/payment.hpp"

namespace lossfit {

/// Maximum likelihood for payment Y (left-truncated, right-censored).
/// Solves the two-equation moment-form score system in (gamma, sigma) and
/// maps back through theta = t - sigma*gamma. cov = S_{y,MLE}/n.
FitResult fit_mle_y(const PaymentSample& sample, const PolicyFrame& frame);

/// Asymptotic covariance matrix S_{y,MLE} (NOT divided by n).
Matrix2 mle_cov_y(double theta, double sigma, const PolicyFrame& frame);

/// Maximum likelihood for payment Z (left- and right-censored).
FitResult fit_mle_z(const PaymentSample& sample, const PolicyFrame& frame);

/// Asymptotic covariance matrix S_{z,MLE} (NOT divided by n).
Matrix2 mle_cov_z(double theta, double sigma, const PolicyFrame& frame);

/// Log-likelihood of the log-scale sample under (theta, sigma); the exact
/// observations contribute log f_Y / log f_Z densities, the atoms their
/// masses. Used by diagnostics and tests.
double loglik(const PaymentSample& sample, const PolicyFrame& frame,
              double theta, double sigma);

/// Negative log-likelihood on the recovered currency scale x = v/c + d
/// (stand-alone lognormal), the scale on which NLL/AIC are reported.
double nll_currency(const PaymentSample& sample, const PolicyFrame& frame,
                    double theta, double sigma);

}  // namespace lossfit
