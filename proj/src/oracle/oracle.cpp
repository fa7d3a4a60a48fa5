#include "twoscale/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "twoscale/errors.hpp"
#include "twoscale/simd.hpp"
#include "twoscale/spectral.hpp"

namespace twoscale {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int residual_samples = 257;

std::size_t sz(int n) { return static_cast<std::size_t>(n); }

// Samples the modal forcing f_n(t) r(t, omega t).
class Forcing {
  public:
    Forcing(const Expr& f, const Expr& r, double omega, int N)
        : f_(f), r_(r), omega_(omega), proj_(N), samples_(proj_.nodes().size()), fn_(sz(N)) {
        frozen_ = !f.uses(Var::t);
        if (frozen_) fill(0.0);
    }

    void operator()(double t, std::span<double> g) {
        if (!frozen_) fill(t);
        double tau = std::fmod(omega_ * t, two_pi);
        if (tau < 0.0) tau += two_pi;
        const double rv = r_(0.0, t, tau);
        for (std::size_t n = 0; n < g.size(); ++n) g[n] = fn_[n] * rv;
    }

    const std::vector<double>& coeffs_at(double t) {
        fill(t);
        return fn_;
    }
    std::span<const double> nodes() const { return proj_.nodes(); }

  private:
    void fill(double t) {
        const auto nodes = proj_.nodes();
        for (std::size_t q = 0; q < nodes.size(); ++q) samples_[q] = f_(nodes[q], t, 0.0);
        proj_.project(samples_, fn_);
    }

    Expr f_;
    Expr r_;
    double omega_;
    SineProjector proj_;
    std::vector<double> samples_;
    std::vector<double> fn_;
    bool frozen_ = false;
};

std::vector<double> run_modes(const Expr& f, const Expr& r, double omega, const Grid& grid, int N,
                              std::size_t substeps) {
    Forcing forcing(f, r, omega, N);
    const std::size_t nt = grid.nt();
    std::vector<double> out(nt * sz(N), 0.0);
    std::vector<double> y(sz(N), 0.0);
    std::vector<double> v(sz(N), 0.0);
    std::vector<double> stiff(sz(N));
    for (int n = 1; n <= N; ++n) stiff[sz(n - 1)] = double(n) * double(n);
    std::vector<double> g0(sz(N));
    std::vector<double> gm(sz(N));
    std::vector<double> g1(sz(N));
    forcing(0.0, g0);
    for (std::size_t j = 0; j + 1 < nt; ++j) {
        const double t_left = grid.t(j);
        const double dt = (grid.t(j + 1) - t_left) / static_cast<double>(substeps);
        for (std::size_t m = 0; m < substeps; ++m) {
            const double t = t_left + static_cast<double>(m) * dt;
            forcing(t + 0.5 * dt, gm);
            forcing(m + 1 == substeps ? grid.t(j + 1) : t + dt, g1);
            simd::rk4_oscillators(y, v, stiff, g0, gm, g1, dt);
            std::swap(g0, g1);
        }
        std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>((j + 1) * sz(N)));
    }
    return out;
}

double truncation_residual(const Expr& f, const Grid& grid, int N) {
    Forcing forcing(f, Expr::number(1.0), 1.0, N);
    double worst = 0.0;
    double scale = 1.0;
    for (const double t : {0.0, 0.5 * grid.T(), grid.T()}) {
        const SineCoeffs c{forcing.coeffs_at(t)};
        for (int i = 0; i < residual_samples; ++i) {
            const double x = std::numbers::pi * i / (residual_samples - 1);
            const double fx = f(x, t, 0.0);
            scale = std::max(scale, std::abs(fx));
            worst = std::max(worst, std::abs(c.sum_at(x) - fx));
        }
    }
    return worst / scale;
}

}  // namespace

void integrate_modes(std::span<double> y, std::span<double> v, const ModalForcing& g, double t_start, double dt,
                     std::size_t steps) {
    const std::size_t N = y.size();
    if (v.size() != N) throw DomainError("integrate_modes: state sizes differ");
    std::vector<double> stiff(N);
    for (std::size_t n = 0; n < N; ++n) stiff[n] = double(n + 1) * double(n + 1);
    std::vector<double> g0(N);
    std::vector<double> gm(N);
    std::vector<double> g1(N);
    g(t_start, g0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t_start + static_cast<double>(k) * dt;
        g(t + 0.5 * dt, gm);
        g(t + dt, g1);
        simd::rk4_oscillators(y, v, stiff, g0, gm, g1, dt);
        std::swap(g0, g1);
    }
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

ReferenceSolution solve_reference(const Expr& f, const Expr& r, double omega, const Grid& grid,
                                  const OracleOptions& opt) {
    if (!(omega > 0.0)) throw DomainError("oracle: omega must be positive");
    if (opt.oversample < 20) throw DomainError("oracle: oversample must be at least 20");
    if (opt.modes < 1) throw DomainError("oracle: mode count must be at least 1");
    if (r.uses(Var::x)) throw DomainError("oracle: r must not depend on x");
    const int N = opt.modes;

    const double residual = truncation_residual(f, grid, N);
    if (residual > opt.truncation_tol)
        throw SelfCheckError("oracle: sine truncation residual of f is " + sci(residual) + " with N = " +
                             std::to_string(N));

    const double h = grid.dt();
    const double target = std::min({h, two_pi / (omega * opt.oversample), 1.0 / (double(N) * opt.oversample)});
    const auto substeps = static_cast<std::size_t>(std::ceil(h / target * (1.0 - 1e-12)));

    std::vector<double> fine;
    double estimate = 0.0;
    std::size_t used = substeps;
    if (opt.self_check) {
        const std::vector<double> coarse = run_modes(f, r, omega, grid, N, substeps);
        used = 2 * substeps;
        fine = run_modes(f, r, omega, grid, N, used);
        const Field uc = synthesize(grid, coarse, N);
        const Field uf = synthesize(grid, fine, N);
        estimate = sup_error(uc, uf);
        const double bound = opt.self_check_tol * uf.max_abs();
        if (estimate > bound)
            throw SelfCheckError("oracle: half-step self-check failed, estimate " + sci(estimate) + " exceeds " + sci(bound));
    } else {
        fine = run_modes(f, r, omega, grid, N, used);
    }
    Field u = synthesize(grid, fine, N);
    return ReferenceSolution{grid,
                             N,
                             std::move(fine),
                             std::move(u),
                             h / static_cast<double>(used),
                             opt.oversample,
                             estimate,
                             residual};
}

double sup_error(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw DomainError("sup_error: fields live on different grids");
    double worst = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) worst = std::max(worst, std::abs(da[k] - db[k]));
    return worst;
}

double sup_error(const ReferenceSolution& ref, const AsymptoticSolution& U, double omega) {
    return sup_error(ref.u, assemble_on_grid(U, omega));
}

}  // namespace twoscale
