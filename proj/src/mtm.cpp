#include "lossfit/mtm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lossfit/errors.hpp"
#include "lossfit/normal.hpp"
#include "lossfit/quadrature.hpp"
#include "solve2d.hpp"

namespace lossfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// trimmed population constants c^T_k = (1/(1-a-b)) * int_a^{1-b} Delta_s^k ds
void trimmed_c12(const Proportions& p, double gamma, double& c1, double& c2) {
    const double tau = 1.0 - p.a - p.b;
    c1 = integrate([gamma](double s) { return delta(s, gamma); }, p.a, 1.0 - p.b) / tau;
    c2 = integrate([gamma](double s) { const double d = delta(s, gamma); return d * d; },
                   p.a, 1.0 - p.b) / tau;
}

struct TrimSetup {
    std::vector<double> h;
    std::size_t m, mstar;
};

TrimSetup trim_setup(const PaymentSample& s, const PolicyFrame& fr,
                     const Proportions& p) {
    if (!(p.a >= 0.0) || !(p.b >= 0.0) || !(p.a + p.b < 1.0)) {
        throw Error("proportions: need a >= 0, b >= 0, a + b < 1");
    }
    const std::size_t n = s.size();
    TrimSetup ts;
    ts.m = static_cast<std::size_t>(std::floor(n * p.a));
    ts.mstar = static_cast<std::size_t>(std::floor(n * p.b));
    if (n < ts.m + ts.mstar + 2) {
        throw InsufficientDataError("trimmed moments: middle band has < 2 points");
    }
    ts.h.reserve(n);
    for (double v : s.values) ts.h.push_back(v / fr.c + fr.t);
    std::sort(ts.h.begin(), ts.h.end());
    return ts;
}

void check_trimming(const PaymentSample& s, const TrimSetup& ts, CasePolicy policy) {
    if (policy == CasePolicy::Force) return;
    const double n = static_cast<double>(s.size());
    const bool bad_low = s.kind == PaymentKind::Z && ts.m < s.n0;
    const bool bad_high = ts.mstar < s.n2;
    if (bad_low || bad_high) {
        throw CaseViolationError(
            "trimmed moments: censored mass reaches into the retained band",
            bad_low ? static_cast<double>(s.n0) / n : -1.0,
            bad_high ? static_cast<double>(s.n2) / n : -1.0);
    }
}

WinsorizedMoments trimmed_moments_from(const TrimSetup& ts) {
    const std::size_t n = ts.h.size();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = ts.m; i < n - ts.mstar; ++i) {
        s1 += ts.h[i];
        s2 += ts.h[i] * ts.h[i];
    }
    const double cnt = static_cast<double>(n - ts.m - ts.mstar);
    return {s1 / cnt, s2 / cnt};
}

}  // namespace

WinsorizedMoments sample_trimmed_moments(const PaymentSample& sample,
                                         const PolicyFrame& frame,
                                         const Proportions& props,
                                         CasePolicy policy) {
    TrimSetup ts = trim_setup(sample, frame, props);
    check_trimming(sample, ts, policy);
    return trimmed_moments_from(ts);
}

FitResult fit_mtm_y(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy) {
    if (policy == CasePolicy::Enforce) {
        const double s_emp = s_star(sample);
        if (1.0 - props.b > s_emp) {
            throw CaseViolationError("fit_mtm_y: Case II violated", -1.0,
                                     1.0 - s_emp);
        }
    }
    TrimSetup ts = trim_setup(sample, frame, props);
    check_trimming(sample, ts, policy);
    const WinsorizedMoments wm = trimmed_moments_from(ts);
    const double spread = wm.w2 - wm.w1 * wm.w1;
    if (!(spread > 0.0)) {
        throw InsufficientDataError("fit_mtm_y: trimmed sample has no spread");
    }

    double theta = wm.w1;
    double sigma = std::sqrt(spread);
    std::size_t it = 0;
    bool done = false;
    for (; it < 500; ++it) {
        double c1, c2;
        trimmed_c12(props, (frame.t - theta) / sigma, c1, c2);
        const double sig_new = std::sqrt(spread / (c2 - c1 * c1));
        const double th_new = wm.w1 - c1 * sig_new;
        const double step =
            std::max(std::fabs(th_new - theta), std::fabs(sig_new - sigma));
        theta = th_new;
        sigma = sig_new;
        if (step <= 1e-10) {
            done = true;
            break;
        }
    }
    if (!done) {
        auto resid = [&](const detail::Vec2& x) -> detail::Vec2 {
            double c1, c2;
            trimmed_c12(props, (frame.t - x[0]) / x[1], c1, c2);
            return {x[0] + c1 * x[1] - wm.w1,
                    x[1] * x[1] * (c2 - c1 * c1) - spread};
        };
        const auto sol = detail::solve2d(resid, {theta, sigma}, 1e-12, 100);
        theta = sol.x[0];
        sigma = sol.x[1];
        it += sol.iterations;
    }

    FitResult out;
    out.estimator = Estimator::MTM;
    out.theta_hat = theta;
    out.sigma_hat = sigma;
    out.iterations = it;
    out.converged = true;
    out.extras["a"] = props.a;
    out.extras["b"] = props.b;
    out.extras["s_star_empirical"] = s_star(sample);
    out.extras["s_star_parametric"] =
        s_star(frame, GroundUpModel{frame.w0, theta, sigma});
    return out;
}

FitResult fit_mtm_z(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy) {
    if (policy == CasePolicy::Enforce) {
        const double n = static_cast<double>(sample.size());
        const double fnt = static_cast<double>(sample.n0) / n;
        const double fnT = static_cast<double>(sample.n0 + sample.n1) / n;
        if (props.a < fnt || 1.0 - props.b > fnT) {
            throw CaseViolationError("fit_mtm_z: Case 6 violated", fnt, 1.0 - fnT);
        }
    }
    TrimSetup ts = trim_setup(sample, frame, props);
    check_trimming(sample, ts, policy);
    const WinsorizedMoments wm = trimmed_moments_from(ts);
    const double spread = wm.w2 - wm.w1 * wm.w1;
    if (!(spread > 0.0)) {
        throw InsufficientDataError("fit_mtm_z: trimmed sample has no spread");
    }

    double c1, c2;
    trimmed_c12(props, -kInf, c1, c2);
    FitResult out;
    out.estimator = Estimator::MTM;
    out.sigma_hat = std::sqrt(spread / (c2 - c1 * c1));
    out.theta_hat = wm.w1 - c1 * out.sigma_hat;
    out.iterations = 1;
    out.converged = true;
    out.extras["a"] = props.a;
    out.extras["b"] = props.b;
    const GroundUpModel m{frame.w0, out.theta_hat, out.sigma_hat};
    out.extras["F_t_parametric"] = std_normal_cdf(frame.gamma(m));
    out.extras["F_T_parametric"] = std_normal_cdf(frame.xi(m));
    return out;
}

}  // namespace lossfit
