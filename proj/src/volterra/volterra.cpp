#include "twoscale/volterra.hpp"

#include <cmath>
#include <string>

#include "twoscale/errors.hpp"
#include "twoscale/simd.hpp"

namespace twoscale {

namespace {

double uniform_step(const std::vector<double>& t) {
    if (t.size() < 2) throw DomainError("volterra: need at least two time nodes");
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(h > 0.0)) throw DomainError("volterra: times must increase");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * h) throw DomainError("volterra: time grid is not uniform");
    return h;
}

}  // namespace

std::vector<double> solve_second_kind(const VolterraProblem& p) {
    const std::size_t n = p.times.size();
    const double h = uniform_step(p.times);
    if (p.rhs.size() != n) throw DomainError("volterra: right-hand side size differs from the time grid");
    if (!p.kernel && !p.kernel_row) throw DomainError("volterra: no kernel supplied");

    auto fill_row = [&](std::size_t j, std::span<double> row) {
        if (p.kernel_row) {
            p.kernel_row(j, row);
            return;
        }
        for (std::size_t i = 0; i <= j; ++i) row[i] = p.kernel(p.times[j], p.times[i]);
    };

    // Lower triangle, row j starts at j(j+1)/2.
    std::vector<double> table;
    if (p.precompute) {
        table.resize(n * (n + 1) / 2);
        for (std::size_t j = 0; j < n; ++j) fill_row(j, {table.data() + j * (j + 1) / 2, j + 1});
    }

    std::vector<double> u(n, 0.0);
    std::vector<double> scratch(p.precompute ? 0 : n);
    u[0] = p.rhs[0];
    for (std::size_t j = 1; j < n; ++j) {
        std::span<const double> row;
        if (p.precompute) {
            row = {table.data() + j * (j + 1) / 2, j + 1};
        } else {
            fill_row(j, {scratch.data(), j + 1});
            row = {scratch.data(), j + 1};
        }
        const double diag = 1.0 + 0.5 * h * row[j];
        if (std::abs(diag) < 1e-12)
            throw PreconditionError("volterra: near-singular diagonal factor at t = " + std::to_string(p.times[j]));
        double history = 0.5 * row[0] * u[0];
        if (j > 1) history += simd::dot(row.subspan(1, j - 1), std::span<const double>(u).subspan(1, j - 1));
        u[j] = (p.rhs[j] - h * history) / diag;
    }
    return u;
}

}  // namespace twoscale
