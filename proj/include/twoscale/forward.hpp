#pragma once

#include <optional>
#include <span>
#include <vector>

#include "twoscale/averaging.hpp"
#include "twoscale/expr.hpp"
#include "twoscale/grid.hpp"
#include "twoscale/spectral.hpp"

namespace twoscale {

struct ForwardOptions {
    int modes = 64;
    AveragingOptions averaging;
};

/// Sum of products envelope(x,t) * profile(t,tau).
struct TwoScaleField {
    struct Term {
        Expr envelope;
        PeriodicProfile profile;
    };
    std::vector<Term> terms;

    double operator()(double x, double t, double tau) const;
};

/// y_n(t_j) = (1/n) int_0^{t_j} sin n(t_j - s) f_n(s) r0(s) ds by composite
/// trapezoid on the coefficient times. Result is time-major, nt x N.
std::vector<double> modal_convolution(const TimeSineCoeffs& fc, std::span<const double> r0);

/// u(x_i, t_j) = sum_n c_n(t_j) sin(n x_i) for time-major coefficients.
Field synthesize(const Grid& grid, std::span<const double> coeffs, int N);

Field build_u0(const Expr& f, const TimeSeries& r0, const Grid& grid, int N);
Field build_u1(const BConstants& b, std::span<const double> a1, const Grid& grid);
Field build_u2(const BConstants& b, const AConstants& a, const Grid& grid);
TwoScaleField build_v2(const Expr& f, const PeriodicProfile& rho0);
/// 2 f_t rho1 + 2 f rho1_t
TwoScaleField build_v3(const Expr& f, const PeriodicProfile& rho1, const PeriodicProfile& rho1_t);

/// Pointwise slow correctors; the mode count is a1.size().
double u1_value(const BConstants& b, std::span<const double> a1, double x, double t);
double u2_value(const BConstants& b, const AConstants& a, double x, double t);

struct AsymptoticSolution {
    Grid grid;
    int modes;
    int harmonics;
    Field u0;
    Field u1;
    Field u2;
    Field envelope;  // f(x_i, t_j)
    SplitSource source;
    PeriodicProfile rho0;
    TwoScaleField v2;
    std::optional<TwoScaleField> v3;
    AConstants a;
    BConstants b;
};

/// Builds every term of the expansion for the source f(x,t) r(t,tau).
AsymptoticSolution build_asymptotic(const Expr& f, const Expr& r, const Grid& grid, const ForwardOptions& opt = {});

/// u0 + u1/omega + (u2 + v2(x,t,omega t))/omega^2; grid fields are
/// interpolated bilinearly, tau is reduced mod 2pi.
double assemble(const AsymptoticSolution& U, double omega, double x, double t);
/// Same at every grid node, without interpolation.
Field assemble_on_grid(const AsymptoticSolution& U, double omega);

}  // namespace twoscale
