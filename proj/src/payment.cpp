#include "lossfit/payment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lossfit/errors.hpp"
#include "lossfit/normal.hpp"

namespace lossfit {

PolicyFrame frame(double d, double u, double c, double w0) {
    if (!(w0 < d) || !(d < u) || !(c > 0.0)) {
        throw InvalidPolicyError("frame: requires w0 < d < u and c > 0");
    }
    PolicyFrame f;
    f.d = d;
    f.u = u;
    f.c = c;
    f.w0 = w0;
    f.t = std::log(d - w0);
    f.T = std::log(u - w0);
    f.R = f.T - f.t;
    return f;
}

PaymentSample to_log_scale(const std::vector<double>& raw, const PolicyFrame& fr,
                           PaymentKind kind) {
    PaymentSample out;
    out.kind = kind;
    out.values.reserve(raw.size());
    const double cap = fr.raw_cap();
    const double scale = fr.c * (fr.d - fr.w0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = raw[i];
        if (kind == PaymentKind::Y && !(v > 0.0)) {
            throw OutOfRangeError("to_log_scale: payment Y value at index " +
                                      std::to_string(i) + " must be > 0",
                                  i);
        }
        if (v < 0.0 || v > cap * (1.0 + 1e-9)) {
            throw OutOfRangeError("to_log_scale: payment value at index " +
                                      std::to_string(i) + " outside [0, c(u-d)]",
                                  i);
        }
        if (std::fabs(v - cap) <= 1e-9 * cap) {
            out.values.push_back(fr.cap());
            ++out.n2;
        } else if (v == 0.0) {
            out.values.push_back(0.0);
            ++out.n0;
        } else {
            out.values.push_back(fr.c * std::log(v / scale + 1.0));
            ++out.n1;
        }
    }
    return out;
}

double from_log_scale(double value, const PolicyFrame& fr) {
    return fr.c * (fr.d - fr.w0) * (std::exp(value / fr.c) - 1.0);
}

double pdf_y(double y, const PolicyFrame& fr, const GroundUpModel& m) {
    const double cap = fr.cap();
    if (y == cap) {
        return std_normal_sf(fr.xi(m)) / std_normal_sf(fr.gamma(m));
    }
    if (y <= 0.0 || y > cap) return 0.0;
    const double z = (y / fr.c + fr.t - m.theta) / m.sigma;
    return std_normal_pdf(z) / (m.sigma * fr.c * std_normal_sf(fr.gamma(m)));
}

double pdf_z(double z, const PolicyFrame& fr, const GroundUpModel& m) {
    const double cap = fr.cap();
    if (z == 0.0) return std_normal_cdf(fr.gamma(m));
    if (z == cap) return std_normal_sf(fr.xi(m));
    if (z < 0.0 || z > cap) return 0.0;
    const double x = (z / fr.c + fr.t - m.theta) / m.sigma;
    return std_normal_pdf(x) / (m.sigma * fr.c);
}

double s_star(const PolicyFrame& fr, const GroundUpModel& m) {
    const double g = fr.gamma(m);
    const double x = fr.xi(m);
    return (std_normal_sf(g) - std_normal_sf(x)) / std_normal_sf(g);
}

double s_star(const PaymentSample& sample) {
    if (sample.values.empty()) {
        throw InsufficientDataError("s_star: empty sample");
    }
    return static_cast<double>(sample.n1) / static_cast<double>(sample.size());
}

PaymentSample sample_payments(const PolicyFrame& fr, const GroundUpModel& m,
                              std::size_t n, PaymentKind kind, SeededRng& rng) {
    PaymentSample out;
    out.kind = kind;
    out.values.reserve(n);
    const double cap = fr.cap();
    const double pg = std_normal_cdf(fr.gamma(m));
    for (std::size_t i = 0; i < n; ++i) {
        double x;
        if (kind == PaymentKind::Y) {
            // inverse transform on the law of X | X > t
            const double u = pg + rng.next_open01() * (1.0 - pg);
            x = m.theta + m.sigma * std_normal_quantile(u);
        } else {
            x = m.theta + m.sigma * rng.next_normal();
        }
        if (kind == PaymentKind::Z && x <= fr.t) {
            out.values.push_back(0.0);
            ++out.n0;
        } else if (x >= fr.T) {
            out.values.push_back(cap);
            ++out.n2;
        } else {
            out.values.push_back(fr.c * (x - fr.t));
            ++out.n1;
        }
    }
    return out;
}

}  // namespace lossfit
