#include "twoscale/spectral.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "../quadrature.hpp"
#include "twoscale/errors.hpp"
#include "twoscale/grid.hpp"
#include "twoscale/simd.hpp"

namespace twoscale {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int residual_samples = 257;
constexpr unsigned panel_order = 10;

void require_modes(int N) {
    if (N < 1) throw DomainError("mode count N must be at least 1");
}

}  // namespace

double SineCoeffs::sum_at(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * std::sin(static_cast<double>(i + 1) * x);
    return s;
}

Expr to_expr(const SineCoeffs& c) {
    Expr sum = Expr::number(0.0);
    const Expr x = Expr::variable(Var::x);
    for (int n = 1; n <= c.modes(); ++n) {
        const double v = c[n];
        if (v == 0.0) continue;
        const Expr term = Expr::number(std::abs(v)) * sin(Expr::number(n) * x);
        sum = v < 0.0 ? sum - term : sum + term;
    }
    return sum;
}

SineFit sine_coeffs(const Expr& f, int N, double t, double tol) {
    require_modes(N);
    SineFit fit;
    fit.coeffs.values.resize(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        double err = 0.0;
        const double integral = detail::adaptive_gk([&](double s) { return f(s, t, 0.0) * std::sin(n * s); }, 0.0,
                                                    pi, tol, &err);
        if (!std::isfinite(integral))
            throw PreconditionError("sine coefficient quadrature did not converge for mode " + std::to_string(n), n);
        fit.coeffs.values[static_cast<std::size_t>(n - 1)] = 2.0 / pi * integral;
    }
    for (int i = 0; i < residual_samples; ++i) {
        const double x = pi * i / (residual_samples - 1);
        fit.residual = std::max(fit.residual, std::abs(fit.coeffs.sum_at(x) - f(x, t, 0.0)));
    }
    return fit;
}

SineProjector::SineProjector(int N) : N_(N) {
    require_modes(N);
    using gl = boost::math::quadrature::gauss<double, panel_order>;
    const auto& abscissa = gl::abscissa();  // non-negative half, ascending
    const auto& w = gl::weights();
    // Enough panels that each spans at most about half a period of sin(Nx).
    const int panels = std::max(16, N);
    const double width = pi / panels;
    std::vector<double> panel_w;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (std::size_t i = abscissa.size(); i-- > 0;) {
            if (abscissa[i] == 0.0) continue;
            nodes_.push_back(mid - 0.5 * width * abscissa[i]);
            panel_w.push_back(0.5 * width * w[i]);
        }
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            nodes_.push_back(mid + 0.5 * width * abscissa[i]);
            panel_w.push_back(0.5 * width * w[i]);
        }
    }
    const std::size_t Q = nodes_.size();
    weights_.resize(static_cast<std::size_t>(N) * Q);
    for (int n = 1; n <= N; ++n)
        for (std::size_t q = 0; q < Q; ++q)
            weights_[static_cast<std::size_t>(n - 1) * Q + q] = 2.0 / pi * panel_w[q] * std::sin(n * nodes_[q]);
}

void SineProjector::project(std::span<const double> samples, std::span<double> out) const {
    simd::matvec(weights_, static_cast<std::size_t>(N_), nodes_.size(), samples, out);
}

TimeSineCoeffs::TimeSineCoeffs(const Expr& f, int N, std::span<const double> times)
    : N_(N), times_(times.begin(), times.end()), from_quadrature_(true) {
    const SineProjector proj(N);
    const auto nodes = proj.nodes();
    data_.resize(times_.size() * static_cast<std::size_t>(N));
    std::vector<double> samples(nodes.size());
    for (std::size_t j = 0; j < times_.size(); ++j) {
        for (std::size_t q = 0; q < nodes.size(); ++q) samples[q] = f(nodes[q], times_[j], 0.0);
        proj.project(samples, {data_.data() + j * static_cast<std::size_t>(N), static_cast<std::size_t>(N)});
    }
}

TimeSineCoeffs::TimeSineCoeffs(const SineCoeffs& c, std::span<const double> times)
    : N_(c.modes()), times_(times.begin(), times.end()), from_quadrature_(false) {
    require_modes(N_);
    data_.reserve(times_.size() * static_cast<std::size_t>(N_));
    for (std::size_t j = 0; j < times_.size(); ++j) data_.insert(data_.end(), c.values.begin(), c.values.end());
}

double TimeSineCoeffs::value(double t, int n) const {
    if (times_.size() == 1) return (*this)(0, n);
    const Bracket b = bracket(times_, t);
    return (1.0 - b.w) * (*this)(b.j, n) + b.w * (*this)(b.j + 1, n);
}

AConstants a_constants(const Expr& f, int N) {
    const Expr fxx = diff(diff(f, Var::x), Var::x);
    const Expr fxxt = diff(fxx, Var::t);
    AConstants a;
    a.a1 = sine_coeffs(fxx, N, 0.0).coeffs.values;
    a.a2 = sine_coeffs(fxxt, N, 0.0).coeffs.values;
    return a;
}

double kernel_R(int k, int n, double t) {
    if (n < 1) throw DomainError("kernel_R: n must be at least 1");
    const double dn = n;
    switch (k) {
        case 0:
            return (1.0 - std::cos(dn * t)) / dn;
        case 1:
            return t / dn - std::sin(dn * t) / (dn * dn);
        default:
            throw DomainError("kernel_R: only R_0 and R_1 are defined here");
    }
}

VolterraKernel::VolterraKernel(const TimeSineCoeffs& coeffs, double x0)
    : coeffs_(coeffs), x0_(x0), N_(coeffs.modes()), times_(coeffs.times()) {
    if (!(x0 > 0.0 && x0 < pi)) throw DomainError("observation point x0 must lie in (0, pi)");
    const std::size_t nt = times_.size();
    weight_.resize(static_cast<std::size_t>(N_));
    p_.resize(static_cast<std::size_t>(N_) * nt);
    q_.resize(static_cast<std::size_t>(N_) * nt);
    for (int n = 1; n <= N_; ++n) {
        const std::size_t r = static_cast<std::size_t>(n - 1);
        weight_[r] = n * std::sin(n * x0);
        for (std::size_t i = 0; i < nt; ++i) {
            const double fn = coeffs(i, n);
            p_[r * nt + i] = fn * std::cos(n * times_[i]);
            q_[r * nt + i] = fn * std::sin(n * times_[i]);
        }
    }
}

double VolterraKernel::operator()(double t, double s) const {
    double k = 0.0;
    for (int n = 1; n <= N_; ++n)
        k -= weight_[static_cast<std::size_t>(n - 1)] * coeffs_.value(s, n) * std::sin(n * (t - s));
    return k;
}

void VolterraKernel::row(std::size_t j, std::span<double> out) const {
    if (out.size() <= j || j >= times_.size()) throw DomainError("volterra kernel row out of range");
    const std::size_t nt = times_.size();
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(j + 1), 0.0);
    const std::span<double> head = out.first(j + 1);
    const double t = times_[j];
    for (int n = 1; n <= N_; ++n) {
        const std::size_t r = static_cast<std::size_t>(n - 1);
        const double w = weight_[r];
        // -w [sin nt * p - cos nt * q]
        simd::axpy(-w * std::sin(n * t), std::span<const double>(p_).subspan(r * nt, j + 1), head);
        simd::axpy(w * std::cos(n * t), std::span<const double>(q_).subspan(r * nt, j + 1), head);
    }
    out[j] = 0.0;  // sin n(t - t) = 0
}

}  // namespace twoscale
