#include "lossfit/normal.hpp"

#include <cmath>
#include <limits>

#include "lossfit/errors.hpp"

namespace lossfit {

namespace {

// Acklam's rational approximation to the normal quantile (relative error
// below 1.15e-9 on its own), used as the starting point for refinement.
double quantile_guess(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw UnboundedQuantileError("std_normal_quantile: p must lie strictly in (0,1)");
    }
    double x = quantile_guess(p);
    // One Halley step: e = Phi(x) - p, x -= e/phi / (1 + e*x/(2 phi)).
    // The tail is evaluated on the side that avoids cancellation.
    for (int it = 0; it < 2; ++it) {
        double e = (x < 0.0) ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_sf(x);
        double f = std_normal_pdf(x);
        if (f <= 0.0) break;
        double u = e / f;
        x -= u / (1.0 + 0.5 * u * x);
    }
    return x;
}

double delta(double s, double gamma) {
    double arg;
    if (std::isinf(gamma) && gamma < 0.0) {
        arg = s;
    } else {
        arg = s + (1.0 - s) * std_normal_cdf(gamma);
    }
    if (!(arg > 0.0 && arg < 1.0)) {
        throw UnboundedQuantileError("delta: s + (1-s)Phi(gamma) lies at 0 or 1");
    }
    return std_normal_quantile(arg);
}

OmegaPair omega_pair(double gamma, double xi) {
    if (!(gamma < xi)) {
        throw DegenerateBandError("omega_pair: requires gamma < xi");
    }
    double den = std_normal_sf(gamma) - std_normal_sf(xi);
    double num1 = std::isinf(gamma) ? 0.0 : std_normal_pdf(gamma);
    double num2 = std::isinf(xi) ? 0.0 : std_normal_pdf(xi);
    return {num1 / den, num2 / den};
}

}  // namespace lossfit
