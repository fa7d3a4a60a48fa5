#pragma once

#include <span>
#include <vector>

#include "twoscale/expr.hpp"

namespace twoscale {

/// Coefficients of f(x) = sum_{n=1..N} f_n sin(n x); values[n-1] = f_n.
struct SineCoeffs {
    std::vector<double> values;

    int modes() const noexcept { return static_cast<int>(values.size()); }
    double operator[](int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
    /// sum_n f_n sin(n x)
    double sum_at(double x) const;
};

/// sum_n f_n sin(n x) as an expression in x.
Expr to_expr(const SineCoeffs& c);

struct SineFit {
    SineCoeffs coeffs;
    /// max over a uniform x sample of |sum f_n sin nx - f(x,t)|
    double residual = 0.0;
};

/// f_n(t) = (2/pi) int_0^pi f(s,t) sin(ns) ds, adaptive Gauss-Kronrod.
SineFit sine_coeffs(const Expr& f, int N, double t, double tol = 1e-10);

/// Projection onto sin(nx), n = 1..N, by a fixed composite Gauss-Legendre
/// rule on [0, pi]; the node count scales with N so the rule stays accurate
/// for the highest mode. Used where coefficients are needed at many times.
class SineProjector {
  public:
    explicit SineProjector(int N);

    int modes() const noexcept { return N_; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    /// `samples[q]` = f(nodes()[q]); writes f_1..f_N to `out`.
    void project(std::span<const double> samples, std::span<double> out) const;

  private:
    int N_;
    std::vector<double> nodes_;
    std::vector<double> weights_;  // N x Q, (2/pi) w_q sin(n x_q)
};

/// f_n(t_j) for all grid times, mode-major rows per time.
class TimeSineCoeffs {
  public:
    TimeSineCoeffs(const Expr& f, int N, std::span<const double> times);
    /// From explicit time-independent coefficients.
    TimeSineCoeffs(const SineCoeffs& c, std::span<const double> times);

    int modes() const noexcept { return N_; }
    const std::vector<double>& times() const noexcept { return times_; }
    /// f_n(t_j), n in 1..N
    double operator()(std::size_t j, int n) const noexcept {
        return data_[j * static_cast<std::size_t>(N_) + static_cast<std::size_t>(n - 1)];
    }
    std::span<const double> at(std::size_t j) const noexcept {
        return {data_.data() + j * static_cast<std::size_t>(N_), static_cast<std::size_t>(N_)};
    }
    /// Linear interpolation in t.
    double value(double t, int n) const;
    /// True when built by quadrature of an expression envelope.
    bool from_quadrature() const noexcept { return from_quadrature_; }

  private:
    int N_;
    std::vector<double> times_;
    std::vector<double> data_;
    bool from_quadrature_;
};

/// a_{1,n} = sine coefficient of f_xx at t = 0, a_{2,n} of f_xxt at t = 0.
struct AConstants {
    std::vector<double> a1;
    std::vector<double> a2;
};
AConstants a_constants(const Expr& f, int N);

/// R_{0,n}(t) = (1 - cos nt)/n, R_{1,n}(t) = t/n - sin(nt)/n^2.
double kernel_R(int k, int n, double t);

/// K(t,s) = -sum_{n=1..N} n f_n(s) sin n(t-s) sin(n x0), with f_n on the
/// coefficient grid. Rows on that grid use the separable form
/// sin n(t-s) = sin nt cos ns - cos nt sin ns, so a row costs O(N j).
class VolterraKernel {
  public:
    VolterraKernel(const TimeSineCoeffs& coeffs, double x0);

    double operator()(double t, double s) const;
    /// K(t_j, t_i) for i = 0..j written to row[0..j]; row.size() > j.
    void row(std::size_t j, std::span<double> row) const;

    const std::vector<double>& times() const noexcept { return times_; }

  private:
    TimeSineCoeffs coeffs_;
    double x0_;
    int N_;
    std::vector<double> times_;
    std::vector<double> weight_;  // n sin(n x0)
    std::vector<double> p_;       // N x nt : f_n(t_i) cos(n t_i)
    std::vector<double> q_;       // N x nt : f_n(t_i) sin(n t_i)
};

}  // namespace twoscale
