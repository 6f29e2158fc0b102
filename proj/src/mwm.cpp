#include "lossfit/mwm.hpp"

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

void validate_props(const Proportions& p) {
    if (!(p.a >= 0.0) || !(p.b >= 0.0) || !(p.a + p.b < 1.0)) {
        throw Error("proportions: need a >= 0, b >= 0, a + b < 1");
    }
}

// integral of Delta_s^k over [a, 1-b]; the integrand's endpoint divergences
// (gamma = -inf, a = 0 or b = 0) are integrable and the Gauss panels never
// touch the endpoints.
double integral_delta_pow(double a, double b, double gamma, int k) {
    return integrate([gamma, k](double s) { return std::pow(delta(s, gamma), k); },
                     a, 1.0 - b);
}

double c_k_of(double a, double b, double gamma, int k) {
    double val = integral_delta_pow(a, b, gamma, k);
    if (a > 0.0) val += a * std::pow(delta(a, gamma), k);
    if (b > 0.0) val += b * std::pow(delta(1.0 - b, gamma), k);
    return val;
}

// the common bracket of the theta/sigma partials:
// a*abar*Delta_a^{k-1}/phi(Delta_a) + int s_bar Delta_s^{k-1}/phi(Delta_s) ds
// + b^2*Delta_{1-b}^{k-1}/phi(Delta_{1-b})
double bracket_B(double a, double b, double gamma, int k) {
    double val = integrate(
        [gamma, k](double s) {
            const double d = delta(s, gamma);
            return (1.0 - s) * std::pow(d, k - 1) / std_normal_pdf(d);
        },
        a, 1.0 - b);
    if (a > 0.0) {
        const double da = delta(a, gamma);
        val += a * (1.0 - a) * std::pow(da, k - 1) / std_normal_pdf(da);
    }
    if (b > 0.0) {
        const double db = delta(1.0 - b, gamma);
        val += b * b * std::pow(db, k - 1) / std_normal_pdf(db);
    }
    return val;
}

struct EdgeDerivs {
    double da[5] = {0, 0, 0, 0, 0};  // dc_k/da, k = 1..4
    double db[5] = {0, 0, 0, 0, 0};  // dc_k/db
};

// closed forms: dc_k/da = a*surv(gamma)*k*Delta_a^{k-1}/phi(Delta_a),
//               dc_k/db = -b*surv(gamma)*k*Delta_{1-b}^{k-1}/phi(Delta_{1-b})
EdgeDerivs edge_derivs(double a, double b, double gamma) {
    EdgeDerivs e;
    const double surv = std::isinf(gamma) ? 1.0 : std_normal_sf(gamma);
    if (a > 0.0) {
        const double da = delta(a, gamma);
        const double f = std_normal_pdf(da);
        for (int k = 1; k <= 4; ++k) e.da[k] = a * surv * k * std::pow(da, k - 1) / f;
    }
    if (b > 0.0) {
        const double db = delta(1.0 - b, gamma);
        const double f = std_normal_pdf(db);
        for (int k = 1; k <= 4; ++k) e.db[k] = -b * surv * k * std::pow(db, k - 1) / f;
    }
    return e;
}

CCoefficients build_coeffs(const Proportions& p, double gamma, double sigma) {
    validate_props(p);
    CCoefficients cc;
    for (int k = 1; k <= 4; ++k) cc.c[k] = c_k_of(p.a, p.b, gamma, k);
    if (!(cc.c[2] > cc.c[1] * cc.c[1])) {
        throw Error("c_coeffs: c2 <= c1^2, winsorized kernel has no spread");
    }

    const bool neg_inf = std::isinf(gamma) && gamma < 0.0;
    if (!neg_inf) {
        const double pg = std_normal_pdf(gamma);
        for (int k = 1; k <= 2; ++k) {
            const double B = bracket_B(p.a, p.b, gamma, k);
            cc.dc_dtheta[k] = -(k * pg / sigma) * B;
            cc.dc_dsigma[k] = gamma * cc.dc_dtheta[k];
        }
    }

    const EdgeDerivs e = edge_derivs(p.a, p.b, gamma);
    const double a = p.a, b = p.b;
    const double abar = 1.0 - a, bbar = 1.0 - b;
    const double c1 = cc.c[1], c2 = cc.c[2], c3 = cc.c[3], c4 = cc.c[4];

    cc.cstar1 = (c2 - c1 * c1)
              - a * (e.da[2] - 2.0 * c1 * e.da[1])
              - b * (e.db[2] - 2.0 * c1 * e.db[1])
              + a * abar * e.da[1] * e.da[1]
              + b * bbar * e.db[1] * e.db[1]
              - 2.0 * a * b * e.da[1] * e.db[1];
    cc.cstar2 = 0.5 * ((c3 - c1 * c2)
              - a * (e.da[3] - (c2 * e.da[1] + c1 * e.da[2]))
              - b * (e.db[3] - (c2 * e.db[1] + c1 * e.db[2]))
              + a * abar * e.da[1] * e.da[2]
              + b * bbar * e.db[1] * e.db[2]
              - a * b * (e.da[1] * e.db[2] + e.db[1] * e.da[2]));
    cc.cstar3 = 0.25 * ((c4 - c2 * c2)
              - a * (e.da[4] - 2.0 * c2 * e.da[2])
              - b * (e.db[4] - 2.0 * c2 * e.db[2])
              + a * abar * e.da[2] * e.da[2]
              + b * bbar * e.db[2] * e.db[2]
              - 2.0 * a * b * e.da[2] * e.db[2]);
    return cc;
}

// just c1, c2 -- the per-iteration cost of the payment-Y fit
void c12_of(const Proportions& p, double gamma, double& c1, double& c2) {
    c1 = c_k_of(p.a, p.b, gamma, 1);
    c2 = c_k_of(p.a, p.b, gamma, 2);
}

struct WinsorizedSetup {
    std::vector<double> h;  // sorted h-values
    std::size_t m, mstar;
};

WinsorizedSetup winsorize_setup(const PaymentSample& s, const PolicyFrame& fr,
                                const Proportions& p) {
    validate_props(p);
    const std::size_t n = s.size();
    if (n == 0) throw InsufficientDataError("winsorized moments: empty sample");
    WinsorizedSetup ws;
    ws.m = static_cast<std::size_t>(std::floor(n * p.a));
    ws.mstar = static_cast<std::size_t>(std::floor(n * p.b));
    if (ws.m + ws.mstar >= n) {
        throw Error("winsorized moments: m_n + m*_n >= n, no retained band");
    }
    ws.h.reserve(n);
    for (double v : s.values) ws.h.push_back(v / fr.c + fr.t);
    std::sort(ws.h.begin(), ws.h.end());
    return ws;
}

void check_winsorizing(const PaymentSample& s, const WinsorizedSetup& ws) {
    const double n = static_cast<double>(s.size());
    const bool bad_low = s.kind == PaymentKind::Z && ws.m < s.n0;
    const bool bad_high = ws.mstar < s.n2;
    if (bad_low || bad_high) {
        throw InsufficientProportionError(
            "winsorized moments: proportions below the censored mass",
            bad_low ? static_cast<double>(s.n0) / n : -1.0,
            bad_high ? static_cast<double>(s.n2) / n : -1.0);
    }
}

WinsorizedMoments moments_from(const WinsorizedSetup& ws) {
    const std::size_t n = ws.h.size();
    const double lo = ws.h[ws.m];
    const double hi = ws.h[n - ws.mstar - 1];
    double s1 = ws.m * lo + ws.mstar * hi;
    double s2 = ws.m * lo * lo + ws.mstar * hi * hi;
    for (std::size_t i = ws.m; i < n - ws.mstar; ++i) {
        s1 += ws.h[i];
        s2 += ws.h[i] * ws.h[i];
    }
    return {s1 / n, s2 / n};
}

void check_case_2(const PaymentSample& s, const Proportions& p, CasePolicy policy) {
    if (policy == CasePolicy::Force) return;
    const double n = static_cast<double>(s.size());
    const double s_emp = static_cast<double>(s.n1) / n;
    if (1.0 - p.b > s_emp) {
        throw CaseViolationError("fit_mwm_y: Case II violated, 1-b > empirical s*",
                                 -1.0, 1.0 - s_emp);
    }
}

void check_case_6(const PaymentSample& s, const Proportions& p, CasePolicy policy) {
    if (policy == CasePolicy::Force) return;
    const double n = static_cast<double>(s.size());
    const double fnt = static_cast<double>(s.n0) / n;
    const double fnT = static_cast<double>(s.n0 + s.n1) / n;
    if (p.a < fnt || 1.0 - p.b > fnT) {
        throw CaseViolationError(
            "fit_mwm_z: Case 6 violated, need F_n(t) <= a < 1-b <= F_n(T)", fnt,
            1.0 - fnT);
    }
}

}  // namespace

WinsorizedMoments sample_winsorized_moments(const PaymentSample& sample,
                                            const PolicyFrame& frame,
                                            const Proportions& props,
                                            CasePolicy policy) {
    WinsorizedSetup ws = winsorize_setup(sample, frame, props);
    if (policy == CasePolicy::Enforce) check_winsorizing(sample, ws);
    return moments_from(ws);
}

CCoefficients c_coeffs_y(const Proportions& props, double gamma) {
    return build_coeffs(props, gamma, 1.0);
}

CCoefficients c_coeffs_z(const Proportions& props) {
    return build_coeffs(props, -kInf, 1.0);
}

WinsorizedMoments population_winsorized_moments(double theta, double sigma,
                                                const CCoefficients& cc) {
    return {theta + sigma * cc.c[1],
            theta * theta + 2.0 * theta * sigma * cc.c[1] + sigma * sigma * cc.c[2]};
}

FitResult fit_mwm_y(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy) {
    check_case_2(sample, props, policy);
    WinsorizedSetup ws = winsorize_setup(sample, frame, props);
    if (policy == CasePolicy::Enforce) check_winsorizing(sample, ws);
    const WinsorizedMoments wm = moments_from(ws);
    const double spread = wm.w2 - wm.w1 * wm.w1;
    if (!(spread > 0.0)) {
        throw InsufficientDataError("fit_mwm_y: winsorized sample has no spread");
    }

    double theta = wm.w1;
    double sigma = std::sqrt(spread);
    std::size_t it = 0;
    bool done = false;
    for (; it < 500; ++it) {
        double c1, c2;
        c12_of(props, (frame.t - theta) / sigma, c1, c2);
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
        // Newton on the residual of the moment-matching system
        auto resid = [&](const detail::Vec2& x) -> detail::Vec2 {
            double c1, c2;
            c12_of(props, (frame.t - x[0]) / x[1], c1, c2);
            return {x[0] + c1 * x[1] - wm.w1,
                    x[1] * x[1] * (c2 - c1 * c1) - spread};
        };
        const auto sol = detail::solve2d(resid, {theta, sigma}, 1e-12, 100);
        theta = sol.x[0];
        sigma = sol.x[1];
        it += sol.iterations;
    }

    FitResult out;
    out.estimator = Estimator::MWM;
    out.theta_hat = theta;
    out.sigma_hat = sigma;
    out.iterations = it;
    out.converged = true;
    out.cov = mwm_cov_y(theta, sigma, frame, props)
                  .scaled(1.0 / static_cast<double>(sample.size()));
    out.extras["a"] = props.a;
    out.extras["b"] = props.b;
    out.extras["s_star_empirical"] = s_star(sample);
    out.extras["s_star_parametric"] =
        s_star(frame, GroundUpModel{frame.w0, theta, sigma});
    return out;
}

Matrix2 mwm_cov_y(double theta, double sigma, const PolicyFrame& frame,
                  const Proportions& props) {
    const double gamma = (frame.t - theta) / sigma;
    const CCoefficients cc = build_coeffs(props, gamma, sigma);
    const double c1 = cc.c[1], c2 = cc.c[2];
    const double cvar = c2 - c1 * c1;

    const double s11 = sigma * sigma * cc.cstar1;
    const double s12 = 2.0 * theta * sigma * sigma * cc.cstar1 +
                       2.0 * sigma * sigma * sigma * cc.cstar2;
    const double s22 = 4.0 * theta * theta * sigma * sigma * cc.cstar1 +
                       8.0 * theta * sigma * sigma * sigma * cc.cstar2 +
                       4.0 * std::pow(sigma, 4) * cc.cstar3;

    const double f11 = 1.0 + sigma * cc.dc_dtheta[1];
    const double f12 = c1 + sigma * cc.dc_dsigma[1];
    // the printed f-table repeats f12 and omits f21; completed symmetrically
    // with theta in place of sigma
    const double f21 = cc.dc_dtheta[2] - 2.0 * c1 * cc.dc_dtheta[1];
    const double f22 = cc.dc_dsigma[2] - 2.0 * c1 * cc.dc_dsigma[1];

    const WinsorizedMoments W = population_winsorized_moments(theta, sigma, cc);
    const double wvar = W.w2 - W.w1 * W.w1;
    const double K = 0.5 * std::sqrt(cvar / wvar);
    const double den = f11 * cvar * cvar + K * wvar * (f11 * f22 - f12 * f21);
    if (den == 0.0 || f11 == 0.0) {
        throw SingularInformationError("mwm_cov_y: singular Jacobian denominator");
    }
    const double d21 = -K * (2.0 * f11 * W.w1 * cvar + f21 * wvar) / den;
    const double d22 = K * f11 * cvar / den;
    const double d11 = (1.0 - f12 * d21) / f11;
    const double d12 = -f12 * d22 / f11;

    Matrix2 S;
    S.m11 = d11 * (d11 * s11 + d12 * s12) + d12 * (d11 * s12 + d12 * s22);
    S.m12 = d21 * (d11 * s11 + d12 * s12) + d22 * (d11 * s12 + d12 * s22);
    S.m22 = d21 * (d21 * s11 + d22 * s12) + d22 * (d21 * s12 + d22 * s22);
    return S;
}

FitResult fit_mwm_z(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy) {
    check_case_6(sample, props, policy);
    WinsorizedSetup ws = winsorize_setup(sample, frame, props);
    if (policy == CasePolicy::Enforce) check_winsorizing(sample, ws);
    const WinsorizedMoments wm = moments_from(ws);
    const double spread = wm.w2 - wm.w1 * wm.w1;
    if (!(spread > 0.0)) {
        throw InsufficientDataError("fit_mwm_z: winsorized sample has no spread");
    }

    double c1, c2;
    c12_of(props, -kInf, c1, c2);
    FitResult out;
    out.estimator = Estimator::MWM;
    out.sigma_hat = std::sqrt(spread / (c2 - c1 * c1));
    out.theta_hat = wm.w1 - c1 * out.sigma_hat;
    out.iterations = 1;
    out.converged = true;
    out.cov = mwm_cov_z(out.sigma_hat, props)
                  .scaled(1.0 / static_cast<double>(sample.size()));
    out.extras["a"] = props.a;
    out.extras["b"] = props.b;
    const GroundUpModel m{frame.w0, out.theta_hat, out.sigma_hat};
    out.extras["F_t_parametric"] = std_normal_cdf(frame.gamma(m));
    out.extras["F_T_parametric"] = std_normal_cdf(frame.xi(m));
    return out;
}

Matrix2 mwm_cov_z(double sigma, const Proportions& props) {
    const CCoefficients cc = c_coeffs_z(props);
    const double c1 = cc.c[1], c2 = cc.c[2];
    const double cs1 = cc.cstar1, cs2 = cc.cstar2, cs3 = cc.cstar3;
    const double pref = sigma * sigma / ((c2 - c1 * c1) * (c2 - c1 * c1));
    Matrix2 S;
    S.m11 = pref * (cs1 * c2 * c2 - 2.0 * c1 * c2 * cs2 + c1 * c1 * cs3);
    S.m12 = pref * (-cs1 * c1 * c2 + c2 * cs2 + c1 * c1 * cs2 - c1 * cs3);
    S.m22 = pref * (cs1 * c1 * c1 - 2.0 * c1 * cs2 + cs3);
    return S;
}

}  // namespace lossfit
