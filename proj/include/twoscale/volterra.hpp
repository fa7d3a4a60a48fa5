#pragma once

#include <functional>
#include <span>
#include <vector>

namespace twoscale {

/// u(t) + int_0^t K(t,s) u(s) ds = g(t) on a uniform time grid.
struct VolterraProblem {
    std::vector<double> times;
    /// Pointwise kernel K(t, s), 0 <= s <= t.
    std::function<double(double t, double s)> kernel;
    /// Optional fast row evaluator: writes K(t_j, t_i) for i = 0..j.
    /// When set it is used instead of `kernel`.
    std::function<void(std::size_t j, std::span<double> row)> kernel_row;
    /// g(t_j)
    std::vector<double> rhs;
    /// Tabulate the whole lower triangle of K before marching.
    bool precompute = false;
};

/// Product-trapezoid marching:
///   u_0 = g_0,
///   u_j = [g_j - h (K_j0 u_0 / 2 + sum_{i=1}^{j-1} K_ji u_i)] / (1 + h K_jj / 2).
/// Second order for smooth data. Causal: u_j depends on g_0..g_j only.
/// Throws DomainError for a non-uniform grid or size mismatch, and
/// PreconditionError when |1 + h K_jj / 2| < 1e-12.
std::vector<double> solve_second_kind(const VolterraProblem& p);

}  // namespace twoscale
