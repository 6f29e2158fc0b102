#pragma once

// Damped Newton for 2-equation systems with a centrally differenced Jacobian,
// falling back to a Broyden secant loop on stagnation. Internal.

#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "lossfit/errors.hpp"

namespace lossfit::detail {

using Vec2 = std::array<double, 2>;
using Fn2 = std::function<Vec2(const Vec2&)>;

inline double norm2(const Vec2& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1]); }

struct Solve2dResult {
    Vec2 x;
    std::size_t iterations;
    double residual;
};

inline Solve2dResult solve2d(const Fn2& f, Vec2 x, double tol = 1e-10,
                             std::size_t max_iter = 200) {
    Vec2 fx = f(x);
    double r = norm2(fx);
    double J[2][2];
    bool have_secant_J = false;
    std::size_t it = 0;

    auto step = [&](bool numeric) -> bool {
        if (numeric) {
            for (int j = 0; j < 2; ++j) {
                const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
                Vec2 xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const Vec2 fp = f(xp), fm = f(xm);
                J[0][j] = (fp[0] - fm[0]) / (2 * h);
                J[1][j] = (fp[1] - fm[1]) / (2 * h);
            }
        }
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det)) return false;
        const Vec2 dx = {-(J[1][1] * fx[0] - J[0][1] * fx[1]) / det,
                         -(-J[1][0] * fx[0] + J[0][0] * fx[1]) / det};
        double lambda = 1.0;
        for (int ls = 0; ls < 40; ++ls) {
            const Vec2 xn = {x[0] + lambda * dx[0], x[1] + lambda * dx[1]};
            const Vec2 fn = f(xn);
            const double rn = norm2(fn);
            if (std::isfinite(rn) && rn < r * (1.0 - 1e-4 * lambda)) {
                if (!numeric) {
                    // Broyden rank-1 update
                    const Vec2 s = {xn[0] - x[0], xn[1] - x[1]};
                    const Vec2 df = {fn[0] - fx[0], fn[1] - fx[1]};
                    const double ss = s[0] * s[0] + s[1] * s[1];
                    const Vec2 Js = {J[0][0] * s[0] + J[0][1] * s[1],
                                     J[1][0] * s[0] + J[1][1] * s[1]};
                    for (int i = 0; i < 2; ++i)
                        for (int k = 0; k < 2; ++k)
                            J[i][k] += (df[i] - Js[i]) * s[k] / ss;
                }
                x = xn;
                fx = fn;
                r = rn;
                return true;
            }
            lambda *= 0.5;
        }
        return false;
    };

    while (r > tol && it < max_iter) {
        ++it;
        if (step(true)) {
            have_secant_J = true;
            continue;
        }
        // Newton stalled: secant/Broyden phase on the last Jacobian
        bool progressed = false;
        while (r > tol && it < max_iter && have_secant_J) {
            ++it;
            if (!step(false)) break;
            progressed = true;
        }
        if (r <= tol) break;
        if (!progressed) {
            throw ConvergenceError("solve2d: iteration stalled", x[0], x[1], r);
        }
    }
    if (r > tol) {
        throw ConvergenceError("solve2d: no convergence within iteration budget",
                               x[0], x[1], r);
    }
    return {x, it, r};
}

}  // namespace lossfit::detail
