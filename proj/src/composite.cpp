#include "lossfit/composite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "lossfit/errors.hpp"
#include "lossfit/normal.hpp"
#include "lossfit/quadrature.hpp"

namespace lossfit {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005;

double ln_body_pdf(double x, const CompositeParams& p) {
    const double z = (std::log(x - p.w0) - p.theta) / p.sigma;
    return std_normal_pdf(z) / (p.sigma * (x - p.w0));
}

double ln_body_cdf(double x, const CompositeParams& p) {
    if (x <= p.w0) return 0.0;
    return std_normal_cdf((std::log(x - p.w0) - p.theta) / p.sigma);
}

// tail survival (x > x0); Pareto-type with the same w0 shift as the body
double tail_sf(double x, const CompositeParams& p) {
    if (p.variant == CompositeVariant::LNPaI) {
        return std::pow((p.x0 - p.w0) / (x - p.w0), p.alpha);
    }
    return std::pow((p.lambda + p.x0 - p.w0) / (p.lambda + x - p.w0), p.alpha);
}

double tail_pdf(double x, const CompositeParams& p) {
    if (p.variant == CompositeVariant::LNPaI) {
        return p.alpha * std::pow(p.x0 - p.w0, p.alpha) /
               std::pow(x - p.w0, p.alpha + 1.0);
    }
    return p.alpha * std::pow(p.lambda + p.x0 - p.w0, p.alpha) /
           std::pow(p.lambda + x - p.w0, p.alpha + 1.0);
}

}  // namespace

CompositeParams make_composite(CompositeVariant variant, double w0, double x0,
                               double alpha, double sigma, double lambda) {
    if (!(x0 > w0) || !(alpha > 0.0) || !(sigma > 0.0) ||
        (variant == CompositeVariant::LNGPD && !(lambda > 0.0))) {
        throw Error("make_composite: requires x0 > w0, alpha > 0, sigma > 0 (and lambda > 0 for the GPD tail)");
    }
    CompositeParams p;
    p.variant = variant;
    p.w0 = w0;
    p.x0 = x0;
    p.alpha = alpha;
    p.sigma = sigma;
    p.lambda = (variant == CompositeVariant::LNGPD) ? lambda : 0.0;
    // differentiability at x0 fixes theta; continuity fixes the weight
    const double kappa = (variant == CompositeVariant::LNPaI)
                             ? alpha
                             : (alpha + 1.0) * (x0 - w0) / (lambda + x0 - w0) - 1.0;
    p.theta = std::log(x0 - w0) - kappa * sigma * sigma;
    const double m = kappa * sigma;
    const double ratio = (variant == CompositeVariant::LNPaI)
                             ? kSqrt2Pi * alpha * sigma * std_normal_cdf(m) *
                                   std::exp(0.5 * m * m)
                             : kSqrt2Pi * alpha * sigma * (x0 - w0) *
                                   std_normal_cdf(m) * std::exp(0.5 * m * m) /
                                   (lambda + x0 - w0);
    p.w = ratio / (ratio + 1.0);
    return p;
}

PdfCdf composite_pdf_cdf(double x, const CompositeParams& p) {
    if (!(x > p.w0)) throw Error("composite_pdf_cdf: x must exceed w0");
    const double F1x0 = ln_body_cdf(p.x0, p);
    if (x <= p.x0) {
        return {p.w * ln_body_pdf(x, p) / F1x0, p.w * ln_body_cdf(x, p) / F1x0};
    }
    return {(1.0 - p.w) * tail_pdf(x, p),
            p.w + (1.0 - p.w) * (1.0 - tail_sf(x, p))};
}

double composite_loglik(const PaymentSample& sample, const PolicyFrame& fr,
                        const CompositeParams& p, PaymentKind kind) {
    if (!(p.x0 > fr.d) || !(p.x0 < fr.u)) {
        throw InvalidThresholdError("composite_loglik: x0 must lie strictly inside (d, u)");
    }
    const double cap = fr.cap();
    const double F1x0 = ln_body_cdf(p.x0, p);
    const double log_w_over_F1x0 = std::log(p.w) - std::log(F1x0);
    const double log_1mw = std::log(1.0 - p.w);
    const double log_sf_u = std::log(tail_sf(fr.u, p));

    double ll = 0.0;
    std::size_t n_below_x0 = 0, n_above_x0 = 0;
    for (double v : sample.values) {
        if (v == 0.0) {
            // payment Z left-censored at d; log F1(d) here, the w/F1(x0)
            // factor joins through the x <= x0 count below
            ll += std::log(ln_body_cdf(fr.d, p));
            ++n_below_x0;
            continue;
        }
        if (v >= cap) {
            ll += log_sf_u;
            ++n_above_x0;
            continue;
        }
        const double x = from_log_scale(v, fr) / fr.c + fr.d;
        if (x <= p.x0) {
            ll += std::log(ln_body_pdf(x, p));
            ++n_below_x0;
        } else {
            ll += std::log(tail_pdf(x, p));
            ++n_above_x0;
        }
    }
    ll += static_cast<double>(n_below_x0) * log_w_over_F1x0;
    ll += static_cast<double>(n_above_x0) * log_1mw;
    if (kind == PaymentKind::Y) {
        const double Fd = p.w * ln_body_cdf(fr.d, p) / F1x0;
        ll -= static_cast<double>(sample.size()) * std::log(1.0 - Fd);
    }
    return ll;
}

double composite_lev(const CompositeParams& p, const PolicyFrame& fr,
                     PaymentKind kind) {
    auto lim_ev = [&](double w) {
        // E[X ^ w] = integral of the survival function over (0, w)
        const double base = std::max(p.w0, 0.0);
        double v = base;
        v += integrate(
            [&](double x) { return 1.0 - composite_pdf_cdf(x, p).cdf; },
            base + 1e-12 * std::max(1.0, base), w,
            {1e-9, 1e-9, 400});
        return v;
    };
    const double num = lim_ev(fr.u) - lim_ev(fr.d);
    if (kind == PaymentKind::Z) return num;
    const double Fd = composite_pdf_cdf(fr.d, p).cdf;
    return num / (1.0 - Fd);
}

namespace {

// plain Nelder-Mead on R^n, deterministic
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double scale, double& fbest,
                                std::size_t max_iter = 4000) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> sx(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) sx[i + 1][i] += scale;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(sx[i]);

    auto order = [&]() {
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(sx[i], sx[j]);
                }
    };
    order();
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (std::fabs(fv[n] - fv[0]) <= 1e-11 * (std::fabs(fv[0]) + 1e-11)) break;
        std::vector<double> cen(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) cen[j] += sx[i][j];
        }
        for (double& c : cen) c /= static_cast<double>(n);
        auto mix = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = cen[j] + t * (sx[n][j] - cen[j]);
            return p;
        };
        auto xr = mix(-1.0);
        double fr_ = f(xr);
        if (fr_ < fv[0]) {
            auto xe = mix(-2.0);
            double fe = f(xe);
            if (fe < fr_) { sx[n] = xe; fv[n] = fe; }
            else { sx[n] = xr; fv[n] = fr_; }
        } else if (fr_ < fv[n - 1]) {
            sx[n] = xr; fv[n] = fr_;
        } else {
            auto xc = mix(fr_ < fv[n] ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < std::min(fr_, fv[n])) { sx[n] = xc; fv[n] = fc; }
            else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        sx[i][j] = sx[0][j] + 0.5 * (sx[i][j] - sx[0][j]);
                    fv[i] = f(sx[i]);
                }
            }
        }
        order();
    }
    fbest = fv[0];
    return sx[0];
}

}  // namespace

FitResult fit_composite(const PaymentSample& sample, const PolicyFrame& fr,
                        CompositeVariant variant, PaymentKind kind) {
    if (sample.n1 < 4) {
        throw InsufficientDataError("fit_composite: needs at least 4 exact observations");
    }
    const bool gpd = variant == CompositeVariant::LNGPD;
    const std::size_t npar = gpd ? 4 : 3;

    // exact recovered losses, for start placement
    std::vector<double> xs;
    const double cap = fr.cap();
    for (double v : sample.values) {
        if (v > 0.0 && v < cap) xs.push_back(from_log_scale(v, fr) / fr.c + fr.d);
    }
    std::sort(xs.begin(), xs.end());
    double hsum = 0.0, hsum2 = 0.0;
    for (double x : xs) {
        const double h = std::log(x - fr.w0);
        hsum += h;
        hsum2 += h * h;
    }
    const double hn = static_cast<double>(xs.size());
    const double sig0 = std::sqrt(std::max(hsum2 / hn - (hsum / hn) * (hsum / hn), 1e-4));

    auto clamp01 = [](double v) { return std::min(std::max(v, 1e-9), 1.0 - 1e-9); };
    auto unpack = [&](const std::vector<double>& q) {
        const double frac = 1.0 / (1.0 + std::exp(-q[0]));
        const double x0 = fr.d + (fr.u - fr.d) * clamp01(frac);
        const double alpha = std::exp(q[1]);
        const double sigma = std::exp(q[2]);
        const double lambda = gpd ? std::exp(q[3]) : 0.0;
        return make_composite(variant, fr.w0, x0, alpha, sigma, lambda);
    };
    auto objective = [&](const std::vector<double>& q) {
        double nll;
        try {
            nll = -composite_loglik(sample, fr, unpack(q), kind);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
        return std::isfinite(nll) ? nll : std::numeric_limits<double>::infinity();
    };

    // 8 deterministic starts: threshold at upper sample quantiles x alpha grid
    const double qfracs[4] = {0.75, 0.90, 0.97, 0.995};
    const double alphas[2] = {0.7, 1.3};
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> best_q;
    for (double qf : qfracs) {
        for (double al : alphas) {
            double x0s = xs[static_cast<std::size_t>(qf * (hn - 1))];
            x0s = std::min(std::max(x0s, fr.d + 1e-6 * (fr.u - fr.d)),
                           fr.u - 1e-6 * (fr.u - fr.d));
            std::vector<double> q(npar);
            const double frac = (x0s - fr.d) / (fr.u - fr.d);
            q[0] = std::log(frac / (1.0 - frac));
            q[1] = std::log(al);
            q[2] = std::log(sig0);
            if (gpd) q[3] = std::log(std::max(x0s - fr.w0, 1.0));
            double fbest;
            auto qmin = nelder_mead(objective, q, 0.5, fbest);
            if (fbest < best_f) {
                best_f = fbest;
                best_q = qmin;
            }
        }
    }
    if (!std::isfinite(best_f)) {
        throw ConvergenceError("fit_composite: all starts failed", 0.0, 0.0, best_f);
    }
    // polish the incumbent with a tighter simplex
    double fpol;
    auto qpol = nelder_mead(objective, best_q, 0.05, fpol);
    if (fpol < best_f) {
        best_f = fpol;
        best_q = qpol;
    }

    const CompositeParams p = unpack(best_q);
    FitResult out;
    out.estimator = gpd ? Estimator::LNGPD : Estimator::LNPaI;
    out.theta_hat = p.theta;
    out.sigma_hat = p.sigma;
    out.iterations = 0;
    out.converged = true;
    out.extras["x0"] = p.x0;
    out.extras["alpha"] = p.alpha;
    if (gpd) out.extras["lambda"] = p.lambda;
    out.extras["w"] = p.w;
    out.extras["nll"] = best_f;
    out.extras["aic"] = 2.0 * best_f + 2.0 * static_cast<double>(npar);
    out.extras["lev"] = composite_lev(p, fr, kind);
    return out;
}

}  // namespace lossfit
