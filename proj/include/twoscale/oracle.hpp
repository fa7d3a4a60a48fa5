#pragma once

#include <functional>
#include <span>
#include <vector>

#include "twoscale/expr.hpp"
#include "twoscale/forward.hpp"
#include "twoscale/grid.hpp"

namespace twoscale {

struct OracleOptions {
    int modes = 64;
    int oversample = 40;  // >= 20
    bool self_check = true;
    // Allowed max|u_dt - u_dt/2| relative to max|u|.
    double self_check_tol = 1e-7;
    // Allowed sine-truncation residual of f relative to max(1, max|f|).
    double truncation_tol = 1e-6;
};

struct ReferenceSolution {
    Grid grid;
    int modes;
    std::vector<double> amplitudes;  // y_n(t_j), time-major nt x N
    Field u;
    double dt;  // internal step of the reported (finer) run
    int oversample;
    double error_estimate;  // max |u_dt - u_dt/2| over the grid, 0 when not run
    double truncation_residual;

    double amplitude(std::size_t j, int n) const {
        return amplitudes[j * static_cast<std::size_t>(modes) + static_cast<std::size_t>(n - 1)];
    }
};

/// Resolves u_tt = u_xx + f(x,t) r(t, omega t) with zero initial data in
/// the sine basis: y_n'' + n^2 y_n = f_n(t) r(t, omega t), classical RK4 with
/// dt = min(grid step, 2pi/(omega oversample), 1/(N oversample)) rounded
/// down to divide the grid step. The source is sampled at every RK stage.
/// Throws SelfCheckError when the truncation or half-step checks fail.
ReferenceSolution solve_reference(const Expr& f, const Expr& r, double omega, const Grid& grid,
                                  const OracleOptions& opt = {});

/// g(t) -> g_n(t), n = 1..N
using ModalForcing = std::function<void(double t, std::span<double> g)>;

/// Advances y_n'' + n^2 y_n = g_n(t) by `steps` RK4 steps of size dt.
void integrate_modes(std::span<double> y, std::span<double> v, const ModalForcing& g, double t_start, double dt,
                     std::size_t steps);

/// max |a - b| over the grid; DomainError if the grids differ.
double sup_error(const Field& a, const Field& b);
double sup_error(const ReferenceSolution& ref, const AsymptoticSolution& U, double omega);

}  // namespace twoscale
