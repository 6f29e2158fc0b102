#pragma once

#include <cmath>

namespace lossfit {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
inline constexpr double kSqrt2 = 1.4142135623730950488;

/// Standard normal density phi(x) = exp(-x^2/2)/sqrt(2*pi).
inline double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal cdf Phi(x), evaluated through erfc so that both tails
/// keep full relative accuracy. Phi(-inf) = 0 and Phi(+inf) = 1 exactly.
inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

/// Survival function 1 - Phi(x) without cancellation in the upper tail.
inline double std_normal_sf(double x) {
    return 0.5 * std::erfc(x / kSqrt2);
}

/// Inverse of Phi. Rational initial guess refined by a Halley step against
/// the erfc-based cdf; accurate to a few ulps on (0,1).
/// Throws UnboundedQuantileError at p = 0 or p = 1.
double std_normal_quantile(double p);

/// Mills-type ratio phi(x) / (1 - Phi(x)).
inline double mills_upper(double x) {
    return std_normal_pdf(x) / std_normal_sf(x);
}

/// phi(x) / Phi(x), the left-censoring analogue.
inline double mills_lower(double x) {
    return std_normal_pdf(x) / std_normal_cdf(x);
}

/// Winsorized quantile kernel: Phi^{-1}(s + (1-s)*Phi(gamma)).
/// gamma = -inf is a first-class input and reduces to Phi^{-1}(s).
double delta(double s, double gamma);

/// Truncated-band ratios (phi(gamma)/den, phi(xi)/den) with the shared
/// denominator den = survival(gamma) - survival(xi). Requires gamma < xi.
struct OmegaPair {
    double omega1;
    double omega2;
};
OmegaPair omega_pair(double gamma, double xi);

}  // namespace lossfit
