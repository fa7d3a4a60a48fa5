#include "twoscale/forward.hpp"

#include <cmath>
#include <numbers>

#include "twoscale/errors.hpp"
#include "twoscale/simd.hpp"

namespace twoscale {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t sz(int n) { return static_cast<std::size_t>(n); }

// Row-major nx x N table of sin(n x_i).
std::vector<double> sine_table(const Grid& grid, int N) {
    std::vector<double> s(grid.nx() * sz(N));
    for (std::size_t i = 0; i < grid.nx(); ++i)
        for (int n = 1; n <= N; ++n) s[i * sz(N) + sz(n - 1)] = std::sin(n * grid.x(i));
    return s;
}

// Adds g(x_i) * h(t_j) to every node of u.
template <class Space, class Time>
void add_separable(Field& u, Space g, Time h) {
    const Grid& grid = u.grid();
    std::vector<double> gx(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) gx[i] = g(grid.x(i));
    for (std::size_t j = 0; j < grid.nt(); ++j) simd::axpy(h(grid.t(j)), gx, u.row(j));
}

double fmod_tau(double omega, double t) {
    const double tau = std::fmod(omega * t, two_pi);
    return tau < 0.0 ? tau + two_pi : tau;
}

}  // namespace

double TwoScaleField::operator()(double x, double t, double tau) const {
    double s = 0.0;
    for (const Term& term : terms) s += term.envelope(x, t, 0.0) * term.profile(t, tau);
    return s;
}

std::vector<double> modal_convolution(const TimeSineCoeffs& fc, std::span<const double> r0) {
    const auto& times = fc.times();
    const std::size_t nt = times.size();
    if (r0.size() != nt) throw DomainError("modal_convolution: r0 is not sampled on the coefficient times");
    const int N = fc.modes();
    std::vector<double> y(nt * sz(N), 0.0);
    for (int n = 1; n <= N; ++n) {
        // sin n(t-s) = sin nt cos ns - cos nt sin ns; C and S accumulate the
        // trapezoid sums of cos(ns) g(s) and sin(ns) g(s).
        double C = 0.0;
        double S = 0.0;
        double c_prev = 0.0;
        double s_prev = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double g = fc(j, n) * r0[j];
            const double cj = std::cos(n * times[j]) * g;
            const double sj = std::sin(n * times[j]) * g;
            if (j > 0) {
                const double h = times[j] - times[j - 1];
                C += 0.5 * h * (c_prev + cj);
                S += 0.5 * h * (s_prev + sj);
            }
            c_prev = cj;
            s_prev = sj;
            y[j * sz(N) + sz(n - 1)] = (std::sin(n * times[j]) * C - std::cos(n * times[j]) * S) / n;
        }
    }
    return y;
}

Field synthesize(const Grid& grid, std::span<const double> coeffs, int N) {
    if (coeffs.size() != grid.nt() * sz(N)) throw DomainError("synthesize: coefficient table does not match the grid");
    const std::vector<double> table = sine_table(grid, N);
    Field u(grid);
    for (std::size_t j = 0; j < grid.nt(); ++j)
        simd::matvec(table, grid.nx(), sz(N), coeffs.subspan(j * sz(N), sz(N)), u.row(j));
    return u;
}

Field build_u0(const Expr& f, const TimeSeries& r0, const Grid& grid, int N) {
    if (r0.size() != grid.nt()) throw DomainError("build_u0: r0 must be sampled on the grid times");
    const TimeSineCoeffs fc(f, N, grid.times());
    return synthesize(grid, modal_convolution(fc, r0.values), N);
}

Field build_u1(const BConstants& b, std::span<const double> a1, const Grid& grid) {
    const int N = static_cast<int>(a1.size());
    std::vector<double> c(grid.nt() * sz(N));
    for (std::size_t j = 0; j < grid.nt(); ++j)
        for (int n = 1; n <= N; ++n)
            c[j * sz(N) + sz(n - 1)] = -b.b1 * a1[sz(n - 1)] * kernel_R(1, n, grid.t(j)) / n;
    Field u = synthesize(grid, c, N);
    add_separable(
        u, [&](double x) { return b.f(x, 0.0, 0.0); }, [&](double t) { return -b.b1 * t; });
    return u;
}

Field build_u2(const BConstants& b, const AConstants& a, const Grid& grid) {
    const int N = static_cast<int>(a.a1.size());
    if (a.a2.size() != a.a1.size()) throw DomainError("build_u2: a1 and a2 differ in length");
    std::vector<double> c(grid.nt() * sz(N));
    for (std::size_t j = 0; j < grid.nt(); ++j) {
        const double t = grid.t(j);
        for (int n = 1; n <= N; ++n) {
            const double a1 = a.a1[sz(n - 1)];
            const double a2 = a.a2[sz(n - 1)];
            const double r0 = kernel_R(0, n, t);
            const double r1 = kernel_R(1, n, t);
            c[j * sz(N) + sz(n - 1)] = -(-b.b0 * a2 * r1 + b.b0 * a1 * r0 - b.b3 * a1 * r1) / n;
        }
    }
    Field u = synthesize(grid, c, N);
    add_separable(
        u, [&](double x) { return b.f(x, 0.0, 0.0); }, [&](double) { return -b.b0; });
    add_separable(
        u, [&](double x) { return b.u2_velocity(x); }, [](double t) { return t; });
    return u;
}

TwoScaleField build_v2(const Expr& f, const PeriodicProfile& rho0) { return TwoScaleField{{{f, rho0}}}; }

TwoScaleField build_v3(const Expr& f, const PeriodicProfile& rho1, const PeriodicProfile& rho1_t) {
    const Expr two = Expr::number(2.0);
    return TwoScaleField{{{two * diff(f, Var::t), rho1}, {two * f, rho1_t}}};
}

double u1_value(const BConstants& b, std::span<const double> a1, double x, double t) {
    double s = b.f(x, 0.0, 0.0) * t;
    for (std::size_t i = 0; i < a1.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        s += a1[i] * std::sin(n * x) / n * kernel_R(1, n, t);
    }
    return -b.b1 * s;
}

double u2_value(const BConstants& b, const AConstants& a, double x, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.a1.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        const double bracket = -b.b0 * a.a2[i] * kernel_R(1, n, t) + b.b0 * a.a1[i] * kernel_R(0, n, t) -
                               b.b3 * a.a1[i] * kernel_R(1, n, t);
        s -= std::sin(n * x) / n * bracket;
    }
    return s - b.b0 * b.f(x, 0.0, 0.0) + t * b.u2_velocity(x);
}

AsymptoticSolution build_asymptotic(const Expr& f, const Expr& r, const Grid& grid, const ForwardOptions& opt) {
    const int N = opt.modes;
    const auto& times = grid.times();
    SplitSource source = split(r, times, opt.averaging);
    PeriodicProfile p0 = rho0(source.r1);

    // Symbolic t-derivative of r gives rho0_t (for b3) and rho1_t (for v3).
    SplitSource source_t = split(diff(r, Var::t), times, opt.averaging);
    const PeriodicProfile p0_t = rho0(source_t.r1);

    AConstants a = a_constants(f, N);
    BConstants b = b_constants(p0, f, &p0_t);

    Field u0 = build_u0(f, source.r0, grid, N);
    Field u1 = build_u1(b, a.a1, grid);
    Field u2 = build_u2(b, a, grid);
    Field envelope(grid);
    for (std::size_t j = 0; j < grid.nt(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) envelope(i, j) = f(grid.x(i), grid.t(j), 0.0);

    TwoScaleField v2 = build_v2(f, p0);
    TwoScaleField v3 = build_v3(f, rho1(p0), rho1(p0_t));
    return AsymptoticSolution{grid,
                              N,
                              opt.averaging.harmonics,
                              std::move(u0),
                              std::move(u1),
                              std::move(u2),
                              std::move(envelope),
                              std::move(source),
                              std::move(p0),
                              std::move(v2),
                              std::move(v3),
                              std::move(a),
                              std::move(b)};
}

double assemble(const AsymptoticSolution& U, double omega, double x, double t) {
    if (!(omega > 0.0)) throw DomainError("assemble: omega must be positive");
    const double tau = fmod_tau(omega, t);
    const double slow2 = U.u2.at(x, t) + U.envelope.at(x, t) * U.rho0(t, tau);
    return U.u0.at(x, t) + U.u1.at(x, t) / omega + slow2 / (omega * omega);
}

Field assemble_on_grid(const AsymptoticSolution& U, double omega) {
    if (!(omega > 0.0)) throw DomainError("assemble: omega must be positive");
    const Grid& g = U.grid;
    Field out(g);
    const double w1 = 1.0 / omega;
    const double w2 = w1 * w1;
    for (std::size_t j = 0; j < g.nt(); ++j) {
        const double profile = U.rho0.at_node(j, fmod_tau(omega, g.t(j)));
        for (std::size_t i = 0; i < g.nx(); ++i)
            out(i, j) = U.u0(i, j) + w1 * U.u1(i, j) + w2 * (U.u2(i, j) + U.envelope(i, j) * profile);
    }
    return out;
}

}  // namespace twoscale
