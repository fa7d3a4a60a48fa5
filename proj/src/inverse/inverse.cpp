#include "twoscale/inverse.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "../quadrature.hpp"
#include "twoscale/errors.hpp"
#include "twoscale/forward.hpp"
#include "twoscale/volterra.hpp"

namespace twoscale {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t sz(int n) { return static_cast<std::size_t>(n); }

void check_point(double x0, double t0, const Grid& grid) {
    if (!(x0 > 0.0 && x0 < pi)) throw DomainError("x0 must lie in (0, pi)");
    if (!(t0 > 0.0 && t0 <= grid.T() * (1.0 + 1e-12))) throw DomainError("t0 must lie in (0, T]");
}

double value_at(const TimeData& d, double t) {
    if (const auto* e = std::get_if<Expr>(&d)) return (*e)(0.0, t, 0.0);
    return std::get<TimeSeries>(d).at(t);
}

TimeSeries sampled(const TimeData& d, const std::vector<double>& times) {
    TimeSeries s{times, std::vector<double>(times.size())};
    for (std::size_t j = 0; j < times.size(); ++j) s.values[j] = value_at(d, times[j]);
    return s;
}

void require_on_grid(const std::vector<double>& times, const Grid& grid, const char* what) {
    bool ok = times.size() == grid.nt();
    for (std::size_t j = 0; ok && j < times.size(); ++j) ok = std::abs(times[j] - grid.t(j)) <= 1e-12 * (1.0 + grid.T());
    if (!ok) throw DomainError(std::string(what) + " must be sampled on the grid times");
}

// f(x0, t_j), rejecting a vanishing envelope.
std::vector<double> envelope_at(const Expr& f, double x0, const Grid& grid, double tol) {
    std::vector<double> v(grid.nt());
    for (std::size_t j = 0; j < grid.nt(); ++j) {
        v[j] = f(x0, grid.t(j), 0.0);
        if (!(std::abs(v[j]) > tol))
            throw PreconditionError("envelope f(x0, t) vanishes at t = " + std::to_string(grid.t(j)));
    }
    return v;
}

// Second derivative of grid samples: centred in the interior, one-sided
// second-order stencils at both ends.
std::vector<double> second_difference(const std::vector<double>& u, double h) {
    const std::size_t n = u.size();
    if (n < 4) throw DomainError("need at least four samples to differentiate twice");
    std::vector<double> d(n);
    const double h2 = h * h;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / h2;
    d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    d[n - 1] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / h2;
    return d;
}

struct Compatibility {
    double phi0 = 0.0;
    double dphi0 = 0.0;
};

Compatibility check_phi0(const TimeData& phi0, const Grid& grid, double tol) {
    Compatibility c;
    if (const auto* e = std::get_if<Expr>(&phi0)) {
        c.phi0 = (*e)(0.0, 0.0, 0.0);
        c.dphi0 = diff(*e, Var::t)(0.0, 0.0, 0.0);
        if (std::abs(c.phi0) > tol || std::abs(c.dphi0) > tol)
            throw PreconditionError("phi0 violates phi0(0) = phi0'(0) = 0");
        return c;
    }
    const auto& s = std::get<TimeSeries>(phi0);
    require_on_grid(s.times, grid, "phi0");
    const auto& u = s.values;
    const double h = grid.dt();
    c.phi0 = u[0];
    c.dphi0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    // The one-sided slope carries an O(h^2) error of size h^2 |phi'''| / 3.
    double third = 0.0;
    for (std::size_t j = 0; j + 3 < u.size(); ++j)
        third = std::max(third, std::abs(u[j + 3] - 3.0 * u[j + 2] + 3.0 * u[j + 1] - u[j]) / (h * h * h));
    const double scale = 1.0 + s.max_abs();
    if (std::abs(c.phi0) > tol * scale || std::abs(c.dphi0) > tol * scale + h * h * third)
        throw PreconditionError("phi0 violates phi0(0) = phi0'(0) = 0");
    return c;
}

struct OscillatingPart {
    PeriodicProfile r1;
    std::optional<Expr> r1_expr;
    PeriodicProfile rho0_t;  // empty unless chi is symbolic
    double chi_mean = 0.0;
};

// r1 = chi_tautau / envelope(t). `envelope_expr` is the envelope as a
// function of t, `envelope` its grid samples.
OscillatingPart oscillating_part(const OscillatingData& chi, const Expr& envelope_expr,
                                 const std::vector<double>& envelope, const Grid& grid, const InverseOptions& opt) {
    OscillatingPart out;
    const auto& times = grid.times();
    if (const auto* e = std::get_if<Expr>(&chi)) {
        if (e->uses(Var::x)) throw DomainError("chi must be a function of t and tau only");
        const PeriodicProfile chi_p = tau_fourier(*e, times, opt.averaging);
        out.chi_mean = chi_p.max_abs_mean();
        if (out.chi_mean > opt.compat_tol * (1.0 + chi_p.max_abs_coeff()))
            throw PreconditionError("chi does not have zero mean in tau");
        const Expr r1 = diff(diff(*e, Var::tau), Var::tau) / envelope_expr;
        out.r1_expr = r1;
        out.r1 = split(r1, times, opt.averaging).r1;
        out.rho0_t = rho0(split(diff(r1, Var::t), times, opt.averaging).r1);
        return out;
    }
    const auto& p = std::get<PeriodicProfile>(chi);
    require_on_grid(p.times(), grid, "chi");
    out.chi_mean = p.max_abs_mean();
    if (out.chi_mean > opt.compat_tol * (1.0 + p.max_abs_coeff()))
        throw PreconditionError("chi does not have zero mean in tau");
    std::vector<double> inv(envelope.size());
    for (std::size_t j = 0; j < inv.size(); ++j) inv[j] = 1.0 / envelope[j];
    out.r1 = p.tau_derivative(2).scaled(inv);
    for (std::size_t j = 0; j < out.r1.size(); ++j) out.r1.set(j, 0, Complex{});
    return out;
}

// Composite Gauss-Legendre nodes and weights on [a, b].
void gauss_panels(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
    using gl = boost::math::quadrature::gauss<double, 10>;
    const auto& abscissa = gl::abscissa();
    const auto& w = gl::weights();
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            nodes.push_back(mid + 0.5 * width * abscissa[i]);
            weights.push_back(0.5 * width * w[i]);
            if (abscissa[i] != 0.0) {
                nodes.push_back(mid - 0.5 * width * abscissa[i]);
                weights.push_back(0.5 * width * w[i]);
            }
        }
    }
}

// psi_n = (1/n) int_0^t0 sin n(t0 - s) f_n(s) r0(s) ds
SineCoeffs slice_coefficients(const Expr& f, const Expr& r, double t0, int N, const AveragingOptions& avg) {
    std::vector<double> nodes;
    std::vector<double> weights;
    const int panels = std::max(16, static_cast<int>(std::ceil(N * t0 / pi * 2.0)));
    gauss_panels(0.0, t0, panels, nodes, weights);
    const SineProjector proj(N);
    std::vector<double> samples(proj.nodes().size());
    std::vector<double> fn(sz(N));
    auto project = [&](double s) {
        for (std::size_t q = 0; q < samples.size(); ++q) samples[q] = f(proj.nodes()[q], s, 0.0);
        proj.project(samples, fn);
    };
    const bool frozen = !f.uses(Var::t);
    if (frozen) project(0.0);
    SineCoeffs psi;
    psi.values.assign(sz(N), 0.0);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double s = nodes[q];
        if (!frozen) project(s);
        const double w = weights[q] * tau_mean(r, s, avg);
        for (int n = 1; n <= N; ++n) psi.values[sz(n - 1)] += w * std::sin(n * (t0 - s)) / n * fn[sz(n - 1)];
    }
    return psi;
}

}  // namespace

bool RecoveredSource::non_unique(int n) const { return std::find(M0.begin(), M0.end(), n) != M0.end(); }

Observations make_observations(const Expr& f, const Expr& r, double x0, double t0, const Grid& grid,
                               const InverseOptions& opt) {
    check_point(x0, t0, grid);
    envelope_at(f, x0, grid, opt.envelope_tol);
    const int N = opt.modes;
    const auto& times = grid.times();

    const SplitSource source = split(r, times, opt.averaging);
    const PeriodicProfile p0 = rho0(source.r1);
    const PeriodicProfile p0_t = rho0(split(diff(r, Var::t), times, opt.averaging).r1);
    const AConstants a = a_constants(f, N);
    const BConstants b = b_constants(p0, f, &p0_t);

    const std::vector<double> y = modal_convolution(TimeSineCoeffs(f, N, times), source.r0.values);

    Observations obs;
    obs.x0 = x0;
    obs.t0 = t0;
    TimeSeries phi0{times, std::vector<double>(times.size(), 0.0)};
    obs.phi1 = phi0;
    obs.phi2 = phi0;
    std::vector<double> env(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        double s = 0.0;
        for (int n = 1; n <= N; ++n) s += y[j * sz(N) + sz(n - 1)] * std::sin(n * x0);
        phi0.values[j] = s;
        obs.phi1.values[j] = u1_value(b, a.a1, x0, times[j]);
        obs.phi2.values[j] = u2_value(b, a, x0, times[j]);
        env[j] = f(x0, times[j], 0.0);
    }
    obs.phi0 = std::move(phi0);
    obs.chi = p0.scaled(env);
    obs.psi = slice_coefficients(f, r, t0, N, opt.averaging);
    return obs;
}

RecoveredSource recover_r(const Expr& f, const Observations& obs, const Grid& grid, const InverseOptions& opt) {
    if (!(obs.x0 > 0.0 && obs.x0 < pi)) throw DomainError("x0 must lie in (0, pi)");
    const auto& times = grid.times();
    const std::vector<double> env = envelope_at(f, obs.x0, grid, opt.envelope_tol);
    const Compatibility compat = check_phi0(obs.phi0, grid, opt.compat_tol);

    std::vector<double> phi0_tt;
    if (const auto* e = std::get_if<Expr>(&obs.phi0)) {
        const Expr d2 = diff(diff(*e, Var::t), Var::t);
        phi0_tt.resize(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) phi0_tt[j] = d2(0.0, times[j], 0.0);
    } else {
        phi0_tt = second_difference(std::get<TimeSeries>(obs.phi0).values, grid.dt());
    }

    const VolterraKernel kernel(TimeSineCoeffs(f, opt.modes, times), obs.x0);
    VolterraProblem problem;
    problem.times = times;
    problem.rhs.resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) problem.rhs[j] = phi0_tt[j] / env[j];
    problem.kernel_row = [&](std::size_t j, std::span<double> row) {
        kernel.row(j, row);
        const double inv = 1.0 / env[j];
        for (std::size_t i = 0; i <= j; ++i) row[i] *= inv;
    };

    RecoveredSource out;
    out.r0 = TimeSeries{times, solve_second_kind(problem)};

    const Expr f_x0 = substitute(f, Var::x, Expr::number(obs.x0));
    OscillatingPart osc = oscillating_part(obs.chi, f_x0, env, grid, opt);
    out.r1 = std::move(osc.r1);
    out.r1_expr = std::move(osc.r1_expr);

    out.diagnostics = {{"phi0_at_0", compat.phi0},
                       {"dphi0_at_0", compat.dphi0},
                       {"chi_mean", osc.chi_mean},
                       {"r1_mean", out.r1.max_abs_mean()},
                       {"min_abs_envelope", std::abs(*std::min_element(env.begin(), env.end(), [](double a, double b) {
                            return std::abs(a) < std::abs(b);
                        }))}};
    return out;
}

std::vector<double> response_factors(const TimeData& r0, double t0, int N, const Grid& grid) {
    if (N < 1) throw DomainError("mode count must be at least 1");
    if (!(t0 > 0.0 && t0 <= grid.T() * (1.0 + 1e-12))) throw DomainError("t0 must lie in (0, T]");
    std::vector<double> lambda(sz(N));
    if (const auto* e = std::get_if<Expr>(&r0)) {
        for (int n = 1; n <= N; ++n)
            lambda[sz(n - 1)] = detail::adaptive_gk(
                [&](double s) { return std::sin(n * (t0 - s)) / n * (*e)(0.0, s, 0.0); }, 0.0, t0, 1e-14);
        return lambda;
    }
    const auto& s = std::get<TimeSeries>(r0);
    require_on_grid(s.times, grid, "r0");
    const double r_end = s.at(t0);
    for (int n = 1; n <= N; ++n) {
        auto g = [&](double t, double r) { return std::sin(n * (t0 - t)) / n * r; };
        double sum = 0.0;
        std::size_t j = 0;
        for (; j + 1 < grid.nt() && grid.t(j + 1) <= t0; ++j)
            sum += 0.5 * grid.dt() * (g(grid.t(j), s.values[j]) + g(grid.t(j + 1), s.values[j + 1]));
        if (grid.t(j) < t0) sum += 0.5 * (t0 - grid.t(j)) * (g(grid.t(j), s.values[j]) + g(t0, r_end));
        lambda[sz(n - 1)] = sum;
    }
    return lambda;
}

RecoveredSource recover_f(const TimeData& r0, double t0, const SineCoeffs& psi, const Grid& grid,
                          const InverseOptions& opt) {
    const int N = psi.modes();
    const TimeSeries r0s = sampled(r0, grid.times());
    const double at_t0 = value_at(r0, t0);
    if (std::abs(at_t0) <= 1e-12 * (1.0 + r0s.max_abs()))
        throw PreconditionError("r0(t0) vanishes; the slice t0 carries no information");

    RecoveredSource out;
    out.r0 = r0s;
    out.lambda = response_factors(r0, t0, N, grid);
    double peak = 0.0;
    for (const double l : out.lambda) peak = std::max(peak, std::abs(l));
    out.f.values.assign(sz(N), 0.0);
    for (int n = 1; n <= N; ++n) {
        const double l = out.lambda[sz(n - 1)];
        if (std::abs(l) <= opt.degeneracy_tol * peak) {
            if (std::abs(psi[n]) > opt.degeneracy_tol)
                throw PreconditionError("unsolvable: Lambda_" + std::to_string(n) + " vanishes but psi_" +
                                            std::to_string(n) + " = " + std::to_string(psi[n]),
                                        n);
            out.M0.push_back(n);
            continue;
        }
        out.f.values[sz(n - 1)] = psi[n] / l;
    }
    out.diagnostics = {{"r0_at_t0", at_t0}, {"max_abs_lambda", peak}, {"degenerate_modes", double(out.M0.size())}};
    return out;
}

JointRecovery recover_joint(const TimeData& r0, const OscillatingData& chi, const SineCoeffs& psi, double x0,
                            double t0, const Grid& grid, const InverseOptions& opt) {
    check_point(x0, t0, grid);
    const int N = psi.modes();
    const auto& times = grid.times();

    RecoveredSource src;
    src.r0 = sampled(r0, times);
    src.lambda = response_factors(r0, t0, N, grid);
    double peak = 0.0;
    for (const double l : src.lambda) peak = std::max(peak, std::abs(l));
    src.f.values.resize(sz(N));
    for (int n = 1; n <= N; ++n) {
        const double l = src.lambda[sz(n - 1)];
        if (std::abs(l) <= opt.degeneracy_tol * peak)
            throw PreconditionError("degenerate Lambda_" + std::to_string(n) + " at t0", n);
        src.f.values[sz(n - 1)] = psi[n] / l;
    }
    const double f_x0 = src.f.sum_at(x0);
    double f_l1 = 0.0;
    for (const double v : src.f.values) f_l1 += std::abs(v);
    if (std::abs(f_x0) <= 1e-12 * std::max(1.0, f_l1)) throw PreconditionError("recovered f vanishes at x0");

    const std::vector<double> env(times.size(), f_x0);
    OscillatingPart osc = oscillating_part(chi, Expr::number(f_x0), env, grid, opt);
    src.r1 = std::move(osc.r1);
    src.r1_expr = std::move(osc.r1_expr);

    // phi0'' = f(x0) r0 + int_0^t K r0, then two cumulative trapezoids.
    const double h = grid.dt();
    const VolterraKernel kernel(TimeSineCoeffs(src.f, times), x0);
    std::vector<double> row(times.size());
    std::vector<double> acc(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        double integral = 0.0;
        if (j > 0) {
            kernel.row(j, row);
            integral = 0.5 * (row[0] * src.r0.values[0] + row[j] * src.r0.values[j]);
            for (std::size_t i = 1; i < j; ++i) integral += row[i] * src.r0.values[i];
            integral *= h;
        }
        acc[j] = f_x0 * src.r0.values[j] + integral;
    }
    JointRecovery out;
    out.phi0 = TimeSeries{times, std::vector<double>(times.size(), 0.0)};
    double slope = 0.0;
    for (std::size_t j = 1; j < times.size(); ++j) {
        const double next = slope + 0.5 * h * (acc[j - 1] + acc[j]);
        out.phi0.values[j] = out.phi0.values[j - 1] + 0.5 * h * (slope + next);
        slope = next;
    }

    const Expr f_expr = to_expr(src.f);
    const PeriodicProfile p0 = rho0(src.r1);
    const BConstants b = osc.rho0_t.size() > 0 ? b_constants(p0, f_expr, &osc.rho0_t) : b_constants(p0, f_expr);
    AConstants a;
    a.a1.resize(sz(N));
    a.a2.assign(sz(N), 0.0);
    for (int n = 1; n <= N; ++n) a.a1[sz(n - 1)] = -double(n) * double(n) * src.f[n];
    out.phi1 = TimeSeries{times, std::vector<double>(times.size())};
    out.phi2 = out.phi1;
    for (std::size_t j = 0; j < times.size(); ++j) {
        out.phi1.values[j] = u1_value(b, a.a1, x0, times[j]);
        out.phi2.values[j] = u2_value(b, a, x0, times[j]);
    }
    src.diagnostics = {{"f_at_x0", f_x0},
                       {"max_abs_lambda", peak},
                       {"chi_mean", osc.chi_mean},
                       {"b0", b.b0},
                       {"b1", b.b1},
                       {"b3", b.b3}};
    out.source = std::move(src);
    return out;
}

}  // namespace twoscale
