#pragma once

#include <cstddef>
#include <functional>

namespace lossfit {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_subdivisions = 200;
};

/// Adaptive bisection built on a fixed 15-point Gauss-Legendre panel.
/// An interval's error is estimated by comparing the whole-panel value with
/// the sum over its two halves; intervals failing the tolerance are split.
/// Returns 0 when lo == hi. Integrable endpoint singularities are the
/// caller's business (inset the endpoints; see c-coefficients).
/// Throws QuadratureError carrying the running estimate on subdivision
/// exhaustion.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

}  // namespace lossfit
