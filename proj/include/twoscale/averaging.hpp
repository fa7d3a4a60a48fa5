#pragma once

#include <complex>
#include <span>
#include <vector>

#include "twoscale/expr.hpp"
#include "twoscale/grid.hpp"

namespace twoscale {

using Complex = std::complex<double>;

/// 2pi-periodic real function of tau whose Fourier coefficients c_k(t),
/// |k| <= K, are sampled on a time grid:
///
///     p(t, tau) = sum_{k=-K..K} c_k(t) e^{i k tau}.
///
/// Only k >= 0 is stored; c_{-k} = conj(c_k) holds by construction so the
/// profile is real. Between time samples the coefficients are linearly
/// interpolated.
class PeriodicProfile {
  public:
    PeriodicProfile() = default;
    /// Zero profile with `harmonics` >= 1 on the given increasing times.
    PeriodicProfile(std::vector<double> times, int harmonics);

    int harmonics() const noexcept { return K_; }
    const std::vector<double>& times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }

    /// c_k at time index j, any k in [-K, K]; zero outside.
    Complex coeff(std::size_t j, int k) const noexcept;
    /// Sets c_k (and implicitly c_{-k}); k in [0, K]. c_0 is forced real.
    void set(std::size_t j, int k, Complex c);

    /// c_k(t) with linear interpolation in t.
    Complex coeff_at(double t, int k) const;

    double operator()(double t, double tau) const;
    /// Value at time index j (no interpolation).
    double at_node(std::size_t j, double tau) const noexcept;

    /// Coefficient-wise map c_k -> m(k) c_k for k != 0 and c_0 -> m(0) c_0.
    template <class Multiplier>
    PeriodicProfile mapped(Multiplier m) const {
        PeriodicProfile out(times_, K_);
        for (std::size_t j = 0; j < times_.size(); ++j)
            for (int k = 0; k <= K_; ++k) out.set(j, k, m(k) * coeff(j, k));
        return out;
    }

    /// d^order/dtau^order, i.e. c_k -> (ik)^order c_k.
    PeriodicProfile tau_derivative(int order = 1) const;
    /// d/dt by O(h^2) differences of the coefficients (one-sided at the ends).
    PeriodicProfile time_derivative() const;
    /// Multiplies every coefficient at time index j by scale[j].
    PeriodicProfile scaled(std::span<const double> scale) const;

    double max_abs_coeff() const noexcept;
    /// max |c_0(t_j)|; zero for a zero-mean profile.
    double max_abs_mean() const noexcept;

  private:
    std::vector<double> times_;
    int K_ = 0;
    // (K + 1) coefficients per time node, k = 0..K.
    std::vector<Complex> c_;
};

struct AveragingOptions {
    int harmonics = 32;
    // |r(t,0) - r(t,2pi)| allowed, relative to 1 + |r(t,0)|.
    double periodicity_tol = 1e-9;
    // Truncation is rejected when |c_K| > tail_tol * max_k |c_k|.
    double tail_tol = 1e-10;
};

/// <r(t, .)>: uniform trapezoid over one period in tau.
double tau_mean(const Expr& r, double t, const AveragingOptions& opt = {});

/// Fourier coefficients in tau of g(t, tau) (x is bound to 0) on the given
/// times, including the mean c_0. Applies the periodicity and tail checks.
PeriodicProfile tau_fourier(const Expr& g, std::span<const double> times, const AveragingOptions& opt = {});

struct SplitSource {
    TimeSeries r0;
    PeriodicProfile r1;
};

/// r = r0(t) + r1(t, tau) with <r1> = 0.
SplitSource split(const Expr& r, std::span<const double> times, const AveragingOptions& opt = {});

/// Double zero-mean tau-antiderivative of r1: c_k -> -c_k / k^2.
PeriodicProfile rho0(const PeriodicProfile& r1);

/// <int_0^tau rho0> - int_0^tau rho0: c_k -> -c_k / (i k).
PeriodicProfile rho1(const PeriodicProfile& rho0);

/// Constants read off rho0 at (t, tau) = (0, 0) and the envelope f.
struct BConstants {
    double b0 = 0.0;  // rho0(0,0)
    double b1 = 0.0;  // d rho0 / d tau (0,0)
    double b3 = 0.0;  // d rho0 / d t (0,0)
    Expr f;
    Expr f_t;  // df/dt, symbolic
    PeriodicProfile rho0;

    /// b2(x) = b0 df/dt(x,0) + b1 f(x,0).
    double b2(double x) const { return b0 * f_t(x, 0.0, 0.0) + b1 * f(x, 0.0, 0.0); }
    /// Initial velocity combination of the slow omega^-2 corrector:
    /// b0 df/dt(x,0) + b3 f(x,0).
    double u2_velocity(double x) const { return b0 * f_t(x, 0.0, 0.0) + b3 * f(x, 0.0, 0.0); }
};

/// `rho0_t` is the t-derivative profile of rho0; when empty it is taken from
/// finite differences of rho0's coefficients.
BConstants b_constants(const PeriodicProfile& rho0, const Expr& f, const PeriodicProfile* rho0_t = nullptr);

}  // namespace twoscale
