#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twoscale/averaging.hpp"
#include "twoscale/expr.hpp"
#include "twoscale/grid.hpp"
#include "twoscale/spectral.hpp"

namespace twoscale {

/// A function of t given either symbolically or as grid samples.
using TimeData = std::variant<Expr, TimeSeries>;
/// A function of (t, tau) given symbolically or as a harmonic table.
using OscillatingData = std::variant<Expr, PeriodicProfile>;

/// Asymptotic data of the solution at x0 (and the time slice t0).
struct Observations {
    double x0 = 0.0;
    double t0 = 0.0;
    TimeData phi0 = Expr();
    TimeSeries phi1;
    TimeSeries phi2;
    OscillatingData chi = Expr();
    SineCoeffs psi;
};

struct InverseOptions {
    int modes = 64;
    AveragingOptions averaging;
    // Relative threshold for Lambda_n == 0 and absolute threshold on psi_n.
    double degeneracy_tol = 1e-9;
    // phi0(0), phi0'(0) and <chi> must vanish to this tolerance.
    double compat_tol = 1e-10;
    // |f(x0, t)| below this counts as a vanishing envelope.
    double envelope_tol = 1e-9;
};

struct RecoveredSource {
    TimeSeries r0;
    PeriodicProfile r1;
    std::optional<Expr> r1_expr;  // closed form when chi was symbolic
    SineCoeffs f;                 // empty unless recovered
    std::vector<double> lambda;   // Lambda_n(t0) when used
    std::vector<int> M0;          // modes with degenerate Lambda_n
    std::vector<std::pair<std::string, double>> diagnostics;

    bool non_unique(int n) const;
};

struct JointRecovery {
    RecoveredSource source;
    // Consistency pack on the grid times.
    TimeSeries phi0;
    TimeSeries phi1;
    TimeSeries phi2;
};

/// phi0 = u0(x0,.), phi1 = u1(x0,.), phi2 = u2(x0,.), chi = f(x0,t) rho0 and
/// psi_n = sine coefficients of u0(., t0).
Observations make_observations(const Expr& f, const Expr& r, double x0, double t0, const Grid& grid,
                               const InverseOptions& opt = {});

/// r from (phi0, chi) at x0 with f known.
RecoveredSource recover_r(const Expr& f, const Observations& obs, const Grid& grid, const InverseOptions& opt = {});

/// Lambda_n(t0) = int_0^t0 sin n(t0 - s)/n r0(s) ds, n = 1..N. Adaptive
/// quadrature for a symbolic r0, grid trapezoid for samples.
std::vector<double> response_factors(const TimeData& r0, double t0, int N, const Grid& grid);

/// f from psi with r0 known.
RecoveredSource recover_f(const TimeData& r0, double t0, const SineCoeffs& psi, const Grid& grid,
                          const InverseOptions& opt = {});

/// (f, r1) from psi, r0 and chi, plus the congruence data they imply.
JointRecovery recover_joint(const TimeData& r0, const OscillatingData& chi, const SineCoeffs& psi, double x0,
                            double t0, const Grid& grid, const InverseOptions& opt = {});

}  // namespace twoscale
