#pragma once

#include "lossfit/fit_result.hpp"
#include "lossfit/payment.hpp"

namespace lossfit {

/// Lower/upper winsorizing (or trimming) proportions.
struct Proportions {
    double a = 0.0;
    double b = 0.0;
};

/// First two sample winsorized (or trimmed) moments of the h-transformed
/// order statistics.
struct WinsorizedMoments {
    double w1 = 0.0;
    double w2 = 0.0;
};

/// The winsorized-moment constants c_1..c_4, their (theta, sigma) partials
/// for k = 1,2, and the variance constants c*_1..c*_3.
struct CCoefficients {
    double c[5] = {0, 0, 0, 0, 0};     // c[1]..c[4]
    double dc_dtheta[3] = {0, 0, 0};   // k = 1,2
    double dc_dsigma[3] = {0, 0, 0};
    double cstar1 = 0, cstar2 = 0, cstar3 = 0;
};

/// Whether case preconditions (Case II for Y, Case 6 for Z) are enforced or
/// the moments/estimators are computed mechanically regardless. The study
/// harness forces computation to mirror deliberate-violation rows.
enum class CasePolicy { Enforce, Force };

/// Sample winsorized moments per the order-statistic formula with
/// m_n = floor(n a), m*_n = floor(n b) and h(v) = v/c + t.
WinsorizedMoments sample_winsorized_moments(const PaymentSample& sample,
                                            const PolicyFrame& frame,
                                            const Proportions& props,
                                            CasePolicy policy = CasePolicy::Enforce);

/// c-coefficients for payment Y at truncation standardization gamma.
/// The theta/sigma partials are reported at sigma = 1; both scale as 1/sigma
/// (dc/dtheta = -k phi(gamma) B_k / sigma, dc/dsigma = gamma * dc/dtheta).
CCoefficients c_coeffs_y(const Proportions& props, double gamma);

/// gamma -> -inf limit used by payment Z (complete-data constants).
CCoefficients c_coeffs_z(const Proportions& props);

/// Winsorized-moment fit for payment Y (Case II): fixed-point iteration on
/// (theta, sigma) recomputing the gamma-dependent constants each pass,
/// Newton fallback on stagnation. cov = S_{y,MWM}/n.
FitResult fit_mwm_y(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy = CasePolicy::Enforce);

/// S_{y,MWM} (NOT divided by n).
Matrix2 mwm_cov_y(double theta, double sigma, const PolicyFrame& frame,
                  const Proportions& props);

/// Closed-form winsorized-moment fit for payment Z (Case 6). cov = S_{z,MWM}/n.
FitResult fit_mwm_z(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy = CasePolicy::Enforce);

/// S_{z,MWM} (NOT divided by n); depends on sigma only through the sigma^2
/// prefactor.
Matrix2 mwm_cov_z(double sigma, const Proportions& props);

/// Population winsorized moments W_1, W_2 of the h-scale variable implied by
/// the constants: W_1 = theta + sigma c_1, W_2 = theta^2 + 2 theta sigma c_1
/// + sigma^2 c_2.
WinsorizedMoments population_winsorized_moments(double theta, double sigma,
                                                const CCoefficients& cc);

}  // namespace lossfit
