#include "lossfit/mle.hpp"

#include <cmath>

#include "lossfit/errors.hpp"
#include "lossfit/normal.hpp"
#include "solve2d.hpp"

namespace lossfit {

namespace {

struct SampleStats {
    double n, n0, n1, n2;
    double mu1, mu2;  // restricted moments over exact observations
};

SampleStats stats_of(const PaymentSample& s, const PolicyFrame& fr) {
    if (s.n1 < 2) {
        throw InsufficientDataError("fit_mle: needs at least 2 exact observations");
    }
    const double cap = fr.cap();
    double m1 = 0.0, m2 = 0.0;
    for (double v : s.values) {
        if (v > 0.0 && v < cap) {
            m1 += v;
            m2 += v * v;
        }
    }
    const double n1 = static_cast<double>(s.n1);
    return {static_cast<double>(s.size()), static_cast<double>(s.n0), n1,
            static_cast<double>(s.n2), m1 / n1, m2 / n1};
}

detail::Vec2 start_from_exact(const PaymentSample& s, const PolicyFrame& fr) {
    const double cap = fr.cap();
    double sum = 0.0, sum2 = 0.0;
    for (double v : s.values) {
        if (v > 0.0 && v < cap) {
            const double h = v / fr.c + fr.t;
            sum += h;
            sum2 += h * h;
        }
    }
    const double n1 = static_cast<double>(s.n1);
    const double mean = sum / n1;
    const double var = std::max(sum2 / n1 - mean * mean, 1e-12);
    const double sigma0 = std::sqrt(var);
    const double gamma0 = (fr.t - mean) / sigma0;
    return {gamma0, std::log(sigma0)};
}

FitResult fit_mle_impl(const PaymentSample& s, const PolicyFrame& fr, bool is_y) {
    const SampleStats st = stats_of(s, fr);
    const double R = fr.R, c = fr.c;

    // score system in (gamma, log sigma); sigma solved in log form for positivity
    auto system = [&](const detail::Vec2& x) -> detail::Vec2 {
        const double gamma = x[0];
        const double sigma = std::exp(x[1]);
        const double xi = gamma + R / sigma;
        const double o1 = is_y ? (st.n / st.n1) * mills_upper(gamma)
                               : (st.n0 / st.n1) * mills_lower(gamma);
        const double o2 = (st.n2 / st.n1) * mills_upper(xi);
        const double e1 = sigma * (o1 - o2 - gamma) - st.mu1 / c;
        const double e2 =
            sigma * sigma * (1.0 - gamma * (o1 - o2 - gamma) - o2 * R / sigma) -
            st.mu2 / (c * c);
        return {e1, e2};
    };

    detail::Solve2dResult sol;
    try {
        sol = detail::solve2d(system, start_from_exact(s, fr), 1e-10, 200);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("fit_mle: ") + e.what() +
                                   " (last gamma, log-sigma reported)",
                               e.last_x0, e.last_x1, e.residual);
    }

    FitResult out;
    out.estimator = Estimator::MLE;
    const double gamma = sol.x[0];
    const double sigma = std::exp(sol.x[1]);
    out.sigma_hat = sigma;
    out.theta_hat = fr.t - sigma * gamma;
    out.iterations = sol.iterations;
    out.converged = true;
    const Matrix2 S = is_y ? mle_cov_y(out.theta_hat, sigma, fr)
                           : mle_cov_z(out.theta_hat, sigma, fr);
    out.cov = S.scaled(1.0 / st.n);
    out.extras["gamma_hat"] = gamma;
    out.extras["nll"] = nll_currency(s, fr, out.theta_hat, sigma);
    return out;
}

Matrix2 assemble_cov(double gamma, double sigma, double q1, double q2,
                     double q3, double lambda, double extra_den) {
    const double den = q1 * q3 - q2 * q2;
    if (!(den > 0.0) || !(lambda > 0.0)) {
        throw SingularInformationError("mle_cov: information matrix not positive definite");
    }
    const double k = sigma * sigma / (lambda * den * extra_den);
    Matrix2 S;
    S.m11 = k * (-q3 + 2.0 * gamma * q2 - gamma * gamma * q1);
    S.m12 = k * (gamma * q1 - q2);
    S.m22 = k * (-q1);
    if (!S.positive_definite()) {
        throw SingularInformationError("mle_cov: covariance not positive definite");
    }
    return S;
}

}  // namespace

FitResult fit_mle_y(const PaymentSample& sample, const PolicyFrame& frame) {
    return fit_mle_impl(sample, frame, true);
}

FitResult fit_mle_z(const PaymentSample& sample, const PolicyFrame& frame) {
    return fit_mle_impl(sample, frame, false);
}

Matrix2 mle_cov_y(double theta, double sigma, const PolicyFrame& fr) {
    if (!(sigma > 0.0)) throw SingularInformationError("mle_cov_y: sigma must be > 0");
    const GroundUpModel m{fr.w0, theta, sigma};
    const double gamma = fr.gamma(m), xi = fr.xi(m), R = fr.R;
    const auto [o1, o2] = omega_pair(gamma, xi);
    const double mg = mills_upper(gamma), mx = mills_upper(xi);
    const double r1 = -(1.0 + gamma * o1 - xi * o2 - mg * o1 + mx * o2);
    const double r2 = (R * o2 / sigma) * (mx - xi) + (o1 - o2 - gamma);
    const double r3 = (R / sigma) * (R / sigma) * o2 * (xi - mx) -
                      (2.0 - gamma * (o1 - o2 - gamma) - o2 * R / sigma);
    const double lambda =
        (std_normal_sf(gamma) - std_normal_sf(xi)) / std_normal_sf(gamma);
    return assemble_cov(gamma, sigma, r1, r2, r3, lambda, 1.0);
}

Matrix2 mle_cov_z(double theta, double sigma, const PolicyFrame& fr) {
    if (!(sigma > 0.0)) throw SingularInformationError("mle_cov_z: sigma must be > 0");
    const GroundUpModel m{fr.w0, theta, sigma};
    const double gamma = fr.gamma(m), xi = fr.xi(m), R = fr.R;
    const auto [o1, o2] = omega_pair(gamma, xi);
    const double mgl = mills_lower(gamma), mx = mills_upper(xi);
    const double p1 = -(1.0 + gamma * o1 - xi * o2 + mgl * o1 + mx * o2);
    const double p2 = (R * o2 / sigma) * (mx - xi) + (o1 - o2 - gamma);
    const double p3 = (R / sigma) * (R / sigma) * o2 * (xi - mx) -
                      (2.0 - gamma * (o1 - o2 - gamma) - o2 * R / sigma);
    const double lambda =
        (std_normal_sf(gamma) - std_normal_sf(xi)) / std_normal_sf(gamma);
    return assemble_cov(gamma, sigma, p1, p2, p3, lambda, std_normal_sf(gamma));
}

double loglik(const PaymentSample& s, const PolicyFrame& fr, double theta,
              double sigma) {
    const double cap = fr.cap();
    const double gamma = (fr.t - theta) / sigma;
    const double xi = gamma + fr.R / sigma;
    double ll = 0.0;
    for (double v : s.values) {
        if (v > 0.0 && v < cap) {
            const double z = (v / fr.c + fr.t - theta) / sigma;
            ll += std::log(std_normal_pdf(z) / (sigma * fr.c));
        }
    }
    ll += static_cast<double>(s.n2) * std::log(std_normal_sf(xi));
    if (s.kind == PaymentKind::Y) {
        ll -= static_cast<double>(s.size()) * std::log(std_normal_sf(gamma));
    } else {
        ll += static_cast<double>(s.n0) * std::log(std_normal_cdf(gamma));
    }
    return ll;
}

double nll_currency(const PaymentSample& s, const PolicyFrame& fr, double theta,
                    double sigma) {
    // recovered losses x = v/c + d have log(x - w0) = v/c + t
    const double cap = fr.cap();
    const double gamma = (fr.t - theta) / sigma;
    const double xi = gamma + fr.R / sigma;
    double ll = 0.0;
    for (double v : s.values) {
        if (v > 0.0 && v < cap) {
            const double h = v / fr.c + fr.t;
            const double z = (h - theta) / sigma;
            ll += std::log(std_normal_pdf(z) / sigma) - h;
        }
    }
    ll += static_cast<double>(s.n2) * std::log(std_normal_sf(xi));
    if (s.kind == PaymentKind::Y) {
        ll -= static_cast<double>(s.size()) * std::log(std_normal_sf(gamma));
    } else {
        ll += static_cast<double>(s.n0) * std::log(std_normal_cdf(gamma));
    }
    return -ll;
}

}  // namespace lossfit
