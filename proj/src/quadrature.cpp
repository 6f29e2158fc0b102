#include "lossfit/quadrature.hpp"

#include <cmath>
#include <vector>

#include "lossfit/errors.hpp"

namespace lossfit {

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1,1] (positive half; node 0 first).
constexpr double kNodes[8] = {
    0.0000000000000000,    0.20119409399743452,   0.39415134707756337,
    0.57097217260853885,   0.72441773136017005,   0.84820658341042722,
    0.93727339240070590,   0.98799251802048543};
constexpr double kWeights[8] = {
    0.20257824192556127,   0.19843148532711158,   0.18616100001556221,
    0.16626920581699393,   0.13957067792615431,   0.10715922046717194,
    0.070366047488108125,  0.030753241996117268};

double panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = kWeights[0] * f(mid);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i];
        sum += kWeights[i] * (f(mid + dx) + f(mid - dx));
    }
    return sum * half;
}

struct Interval {
    double a, b, whole;
};

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    if (lo == hi) return 0.0;
    const double span = std::fabs(hi - lo);

    std::vector<Interval> stack;
    stack.push_back({lo, hi, panel(f, lo, hi)});
    double accepted = 0.0;
    std::size_t splits = 0;

    while (!stack.empty()) {
        Interval iv = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (iv.a + iv.b);
        const double left = panel(f, iv.a, mid);
        const double right = panel(f, mid, iv.b);
        const double halves = left + right;
        const double err = std::fabs(halves - iv.whole);
        const double tol = spec.abs_tol * std::fabs(iv.b - iv.a) / span +
                           spec.rel_tol * std::fabs(halves);
        if (err <= tol || std::fabs(iv.b - iv.a) <= 1e-15 * span) {
            accepted += halves;
            continue;
        }
        if (++splits > spec.max_subdivisions) {
            double rest = halves;
            for (const Interval& r : stack) rest += r.whole;
            throw QuadratureError("integrate: subdivision limit reached",
                                  accepted + rest, err);
        }
        stack.push_back({iv.a, mid, left});
        stack.push_back({mid, iv.b, right});
    }
    return accepted;
}

}  // namespace lossfit
