#include <cmath>
#include <numbers>
#include <string>

#include "twoscale/averaging.hpp"
#include "twoscale/errors.hpp"
#include "twoscale/simd.hpp"

namespace twoscale {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform tau nodes over one period; 4K+2 of them keeps harmonics up to 3K+1
// from aliasing onto |k| <= K.
std::size_t tau_nodes(int K) { return 4 * static_cast<std::size_t>(K) + 2; }

struct DftTables {
    std::size_t L;
    std::vector<double> cos_table;  // (K+1) x L, already divided by L
    std::vector<double> sin_table;
};

DftTables make_tables(int K) {
    DftTables d;
    d.L = tau_nodes(K);
    const std::size_t rows = static_cast<std::size_t>(K) + 1;
    d.cos_table.resize(rows * d.L);
    d.sin_table.resize(rows * d.L);
    const double inv = 1.0 / static_cast<double>(d.L);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t m = 0; m < d.L; ++m) {
            // reduce k*m mod L before scaling so the angle stays in [0, 2pi)
            const double angle = two_pi * static_cast<double>((k * m) % d.L) / static_cast<double>(d.L);
            d.cos_table[k * d.L + m] = std::cos(angle) * inv;
            d.sin_table[k * d.L + m] = std::sin(angle) * inv;
        }
    }
    return d;
}

void check_periodic(const Expr& g, double t, const AveragingOptions& opt) {
    const double a = g(0.0, t, 0.0);
    const double b = g(0.0, t, two_pi);
    if (std::abs(a - b) > opt.periodicity_tol * (1.0 + std::abs(a)))
        throw PreconditionError("'" + g.str() + "' is not 2pi-periodic in tau at t = " + std::to_string(t));
}

}  // namespace

double tau_mean(const Expr& r, double t, const AveragingOptions& opt) {
    check_periodic(r, t, opt);
    const std::size_t L = tau_nodes(opt.harmonics);
    double s = 0.0;
    for (std::size_t m = 0; m < L; ++m) s += r(0.0, t, two_pi * static_cast<double>(m) / static_cast<double>(L));
    return s / static_cast<double>(L);
}

PeriodicProfile tau_fourier(const Expr& g, std::span<const double> times, const AveragingOptions& opt) {
    const int K = opt.harmonics;
    PeriodicProfile out(std::vector<double>(times.begin(), times.end()), K);
    const DftTables d = make_tables(K);
    const std::size_t rows = static_cast<std::size_t>(K) + 1;
    std::vector<double> samples(d.L), re(rows), im(rows);

    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        check_periodic(g, t, opt);
        for (std::size_t m = 0; m < d.L; ++m)
            samples[m] = g(0.0, t, two_pi * static_cast<double>(m) / static_cast<double>(d.L));
        simd::matvec(d.cos_table, rows, d.L, samples, re);
        simd::matvec(d.sin_table, rows, d.L, samples, im);
        double peak = 0.0;
        for (int k = 0; k <= K; ++k) {
            const Complex c{re[static_cast<std::size_t>(k)], -im[static_cast<std::size_t>(k)]};
            out.set(j, k, c);
            peak = std::max(peak, std::abs(c));
        }
        if (peak > 0.0 && std::abs(out.coeff(j, K)) > opt.tail_tol * peak)
            throw PreconditionError("harmonic bound K = " + std::to_string(K) + " too small for '" + g.str() +
                                        "' (spectral tail not negligible at t = " + std::to_string(t) + ")",
                                    K);
    }
    return out;
}

SplitSource split(const Expr& r, std::span<const double> times, const AveragingOptions& opt) {
    if (r.uses(Var::x)) throw DomainError("source factor r must not depend on x: '" + r.str() + "'");
    PeriodicProfile full = tau_fourier(r, times, opt);
    SplitSource s;
    s.r0.times.assign(times.begin(), times.end());
    s.r0.values.resize(times.size());
    // Without tau the oscillating part is exactly zero; don't keep FFT round-off.
    const bool steady = !r.uses(Var::tau);
    for (std::size_t j = 0; j < times.size(); ++j) {
        s.r0.values[j] = steady ? r(0.0, times[j], 0.0) : full.coeff(j, 0).real();
        const int last = steady ? full.harmonics() : 0;
        for (int k = 0; k <= last; ++k) full.set(j, k, Complex{});
    }
    s.r1 = std::move(full);
    return s;
}

PeriodicProfile rho0(const PeriodicProfile& r1) {
    return r1.mapped([](int k) { return k == 0 ? Complex{} : Complex{-1.0 / (double(k) * double(k)), 0.0}; });
}

PeriodicProfile rho1(const PeriodicProfile& rho0) {
    // -1/(ik) = i/k
    return rho0.mapped([](int k) { return k == 0 ? Complex{} : Complex{0.0, 1.0 / double(k)}; });
}

BConstants b_constants(const PeriodicProfile& rho0, const Expr& f, const PeriodicProfile* rho0_t) {
    BConstants b;
    b.f = f;
    b.f_t = diff(f, Var::t);
    b.rho0 = rho0;
    b.b0 = rho0.at_node(0, 0.0);
    b.b1 = rho0.tau_derivative(1).at_node(0, 0.0);
    if (rho0_t != nullptr)
        b.b3 = rho0_t->at_node(0, 0.0);
    else
        b.b3 = rho0.time_derivative().at_node(0, 0.0);
    return b;
}

}  // namespace twoscale
