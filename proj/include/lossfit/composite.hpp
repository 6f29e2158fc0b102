#pragma once

#include "lossfit/fit_result.hpp"
#include "lossfit/payment.hpp"

namespace lossfit {

enum class CompositeVariant { LNPaI, LNGPD };

/// Spliced lognormal body + Pareto-type tail with continuity and
/// differentiability enforced at the threshold x0. theta and w are derived
/// from (x0, alpha, sigma[, lambda]); free parameters are 3 (LNPaI) or
/// 4 (LNGPD).
struct CompositeParams {
    CompositeVariant variant = CompositeVariant::LNPaI;
    double w0 = 0.0;
    double x0 = 1.0;
    double alpha = 1.0;
    double sigma = 1.0;
    double lambda = 0.0;  // LNGPD only
    // derived
    double theta = 0.0;
    double w = 0.5;
};

/// Applies the splice constraints: theta = ln(x0-w0) - kappa sigma^2 and the
/// weight w from matching density levels at x0 (kappa = alpha for LNPaI).
CompositeParams make_composite(CompositeVariant variant, double w0, double x0,
                               double alpha, double sigma, double lambda = 0.0);

/// (pdf, cdf) of the spliced ground-up distribution at x.
struct PdfCdf {
    double pdf;
    double cdf;
};
PdfCdf composite_pdf_cdf(double x, const CompositeParams& params);

/// Log-likelihood of the sample on the recovered loss scale x = v/c + d,
/// with left truncation (Y) or left censoring (Z) at d and right censoring
/// at u. Throws InvalidThresholdError unless d < x0 < u.
double composite_loglik(const PaymentSample& sample, const PolicyFrame& frame,
                        const CompositeParams& params, PaymentKind kind);

/// Maximizes the composite likelihood over (x0, alpha, sigma[, lambda]) with
/// Nelder-Mead from 8 deterministic starts. extras carry x0/alpha/lambda/w,
/// NLL, AIC and LEV.
FitResult fit_composite(const PaymentSample& sample, const PolicyFrame& frame,
                        CompositeVariant variant, PaymentKind kind);

/// Limited expected value under the composite model:
/// (E[X^u] - E[X^d])/(1-F(d)) for payment Y, E[X^u] - E[X^d] for payment Z.
double composite_lev(const CompositeParams& params, const PolicyFrame& frame,
                     PaymentKind kind);

}  // namespace lossfit
