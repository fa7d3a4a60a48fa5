#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace twoscale::detail {

// Adaptive bisection over Boost's 15-point Gauss-Kronrod rule. A panel is
// accepted when its error estimate is below tol times the L1 norm of the
// integrand over the whole interval, so integrals that vanish by
// orthogonality terminate early instead of chasing a relative target of 0.
// Panels whose estimate is already at round-off level (relative to their own
// L1 norm) are accepted too, since bisecting them cannot make progress.
template <class F>
double adaptive_gk(F&& f, double a, double b, double tol, double* error = nullptr, int max_depth = 30) {
    using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err0 = 0.0;
    double l1 = 0.0;
    const double whole = rule::integrate(f, a, b, 0, 0.0, &err0, &l1);
    const double budget = tol * std::max(l1, 1e-300);
    if (err0 <= budget) {
        if (error) *error = err0;
        return whole;
    }
    double total_err = 0.0;
    constexpr double roundoff = 64.0 * std::numeric_limits<double>::epsilon();
    auto recurse = [&](auto&& self, double lo, double hi, double est, double est_err, double panel_l1,
                       int depth) -> double {
        if (est_err <= budget * (hi - lo) / (b - a) || est_err <= roundoff * panel_l1 || depth >= max_depth) {
            total_err += est_err;
            return est;
        }
        const double mid = 0.5 * (lo + hi);
        double el = 0.0;
        double er = 0.0;
        double ll = 0.0;
        double lr = 0.0;
        const double left = rule::integrate(f, lo, mid, 0, 0.0, &el, &ll);
        const double right = rule::integrate(f, mid, hi, 0, 0.0, &er, &lr);
        return self(self, lo, mid, left, el, ll, depth + 1) + self(self, mid, hi, right, er, lr, depth + 1);
    };
    const double value = recurse(recurse, a, b, whole, err0, l1, 0);
    if (error) *error = total_err;
    return value;
}

}  // namespace twoscale::detail
