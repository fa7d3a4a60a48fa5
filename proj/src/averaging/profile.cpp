#include <algorithm>
#include <cmath>

#include "twoscale/averaging.hpp"
#include "twoscale/errors.hpp"

namespace twoscale {

namespace {

// Derivative at x0 of the quadratic through (x0,f0), (x1,f1), (x2,f2).
Complex lagrange_slope(double x0, double x1, double x2, Complex f0, Complex f1, Complex f2, double at) {
    const double l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    return l0 * f0 + l1 * f1 + l2 * f2;
}

}  // namespace

PeriodicProfile::PeriodicProfile(std::vector<double> times, int harmonics)
    : times_(std::move(times)), K_(harmonics) {
    if (K_ < 1) throw DomainError("periodic profile: need at least one harmonic");
    if (times_.empty()) throw DomainError("periodic profile: empty time grid");
    c_.assign(times_.size() * static_cast<std::size_t>(K_ + 1), Complex{});
}

Complex PeriodicProfile::coeff(std::size_t j, int k) const noexcept {
    if (k > K_ || k < -K_) return {};
    const Complex c = c_[j * static_cast<std::size_t>(K_ + 1) + static_cast<std::size_t>(std::abs(k))];
    return k < 0 ? std::conj(c) : c;
}

void PeriodicProfile::set(std::size_t j, int k, Complex c) {
    if (k < 0 || k > K_ || j >= times_.size()) throw DomainError("periodic profile: index out of range");
    if (k == 0) c = {c.real(), 0.0};
    c_[j * static_cast<std::size_t>(K_ + 1) + static_cast<std::size_t>(k)] = c;
}

Complex PeriodicProfile::coeff_at(double t, int k) const {
    if (times_.size() == 1) return coeff(0, k);
    const Bracket b = bracket(times_, t);
    return (1.0 - b.w) * coeff(b.j, k) + b.w * coeff(b.j + 1, k);
}

double PeriodicProfile::at_node(std::size_t j, double tau) const noexcept {
    double s = coeff(j, 0).real();
    for (int k = 1; k <= K_; ++k) {
        const Complex c = coeff(j, k);
        if (c == Complex{}) continue;
        // c e^{ik tau} + conj(c) e^{-ik tau} = 2 Re(c e^{ik tau})
        s += 2.0 * (c.real() * std::cos(k * tau) - c.imag() * std::sin(k * tau));
    }
    return s;
}

double PeriodicProfile::operator()(double t, double tau) const {
    if (times_.size() == 1) return at_node(0, tau);
    const Bracket b = bracket(times_, t);
    if (b.w == 0.0) return at_node(b.j, tau);
    if (b.w == 1.0) return at_node(b.j + 1, tau);
    return (1.0 - b.w) * at_node(b.j, tau) + b.w * at_node(b.j + 1, tau);
}

PeriodicProfile PeriodicProfile::tau_derivative(int order) const {
    return mapped([order](int k) {
        Complex m{1.0, 0.0};
        for (int i = 0; i < order; ++i) m *= Complex{0.0, static_cast<double>(k)};
        return m;
    });
}

PeriodicProfile PeriodicProfile::time_derivative() const {
    PeriodicProfile out(times_, K_);
    const std::size_t n = times_.size();
    if (n < 2) return out;
    for (std::size_t j = 0; j < n; ++j) {
        for (int k = 0; k <= K_; ++k) {
            Complex d;
            if (n == 2) {
                d = (coeff(1, k) - coeff(0, k)) / (times_[1] - times_[0]);
            } else {
                const std::size_t a = j == 0 ? 0 : (j == n - 1 ? n - 3 : j - 1);
                d = lagrange_slope(times_[a], times_[a + 1], times_[a + 2], coeff(a, k), coeff(a + 1, k),
                                   coeff(a + 2, k), times_[j]);
            }
            out.set(j, k, d);
        }
    }
    return out;
}

PeriodicProfile PeriodicProfile::scaled(std::span<const double> scale) const {
    if (scale.size() != times_.size()) throw DomainError("periodic profile: scale size mismatch");
    PeriodicProfile out(times_, K_);
    for (std::size_t j = 0; j < times_.size(); ++j)
        for (int k = 0; k <= K_; ++k) out.set(j, k, scale[j] * coeff(j, k));
    return out;
}

double PeriodicProfile::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const Complex& c : c_) m = std::max(m, std::abs(c));
    return m;
}

double PeriodicProfile::max_abs_mean() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j < times_.size(); ++j) m = std::max(m, std::abs(coeff(j, 0)));
    return m;
}

}  // namespace twoscale
