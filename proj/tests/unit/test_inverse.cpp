#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "twoscale/inverse.hpp"

using namespace twoscale;
using std::numbers::pi;

namespace {

InverseOptions options(int modes) {
    InverseOptions opt;
    opt.modes = modes;
    opt.averaging.harmonics = 8;
    return opt;
}

}  // namespace

TEST_CASE("observations of a closed-form case") {
    // f = sin x, r = 1 + cos tau: u0 = (1 - cos t) sin x, rho0 = -cos tau,
    // u1 = 0, u2 = cos t sin x
    const Grid g(2.0, 16, 1000);
    const double x0 = 1.0, t0 = 1.5;
    const Observations obs = make_observations(parse("sin(x)"), parse("1+cos(tau)"), x0, t0, g, options(4));
    const auto& phi0 = std::get<TimeSeries>(obs.phi0);
    const auto& chi = std::get<PeriodicProfile>(obs.chi);
    for (std::size_t j = 0; j < g.nt(); j += 50) {
        const double t = g.t(j);
        CHECK(std::abs(phi0.values[j] - (1 - std::cos(t)) * std::sin(x0)) < 1e-6);
        CHECK(std::abs(obs.phi1.values[j]) < 1e-12);
        CHECK(obs.phi2.values[j] == doctest::Approx(std::cos(t) * std::sin(x0)).epsilon(1e-10));
        CHECK(chi.at_node(j, 0.8) == doctest::Approx(-std::sin(x0) * std::cos(0.8)).epsilon(1e-12));
    }
    CHECK(obs.psi[1] == doctest::Approx(1 - std::cos(t0)).epsilon(1e-12));
    for (int n = 2; n <= 4; ++n) CHECK(std::abs(obs.psi[n]) < 1e-12);
}

TEST_CASE("recover r from sampled observations") {
    const Grid g(1.0, 16, 800);
    const Expr f = parse("sin(x)*(1+t/2)+0.3*sin(2*x)");
    const Observations obs = make_observations(f, parse("1+t+(1+t/3)*cos(tau)"), 1.0, 1.0, g, options(8));
    const RecoveredSource rec = recover_r(f, obs, g, options(8));
    double r0_err = 0.0, r1_err = 0.0;
    for (std::size_t j = 0; j < g.nt(); ++j) {
        const double t = g.t(j);
        r0_err = std::max(r0_err, std::abs(rec.r0.values[j] - (1 + t)));
        r1_err = std::max(r1_err, std::abs(rec.r1.coeff(j, 1).real() - 0.5 * (1 + t / 3)));
    }
    CHECK(r0_err < 1e-5);
    CHECK(r1_err < 1e-9);
    CHECK_FALSE(rec.r1_expr.has_value());
}

TEST_CASE("recover r from symbolic observations") {
    // u0(x0, t) for f = sin x, r0 = 1 is (1 - cos t) sin x0
    const Grid g(1.0, 16, 400);
    Observations obs;
    obs.x0 = 1.0;
    obs.t0 = 1.0;
    obs.phi0 = parse("(1-cos(t))*sin(1)");
    obs.chi = parse("-sin(1)*(1+t)*cos(tau)");
    const RecoveredSource rec = recover_r(parse("sin(x)"), obs, g, options(4));
    for (std::size_t j = 0; j < g.nt(); ++j) CHECK(rec.r0.values[j] == doctest::Approx(1.0).epsilon(1e-6));
    REQUIRE(rec.r1_expr.has_value());
    for (double t : {0.0, 0.4, 1.0})
        for (double tau : {0.2, 3.0}) CHECK((*rec.r1_expr)(0, t, tau) == doctest::Approx((1 + t) * std::cos(tau)));
}

TEST_CASE("recover r preconditions") {
    const Grid g(1.0, 16, 100);
    Observations obs;
    obs.x0 = 1.0;
    obs.t0 = 1.0;
    obs.phi0 = parse("(1-cos(t))*sin(1)");
    obs.chi = parse("-cos(tau)");
    // f(pi/2, t) = 0 for sin(2x)
    Observations mid = obs;
    mid.x0 = pi / 2;
    CHECK_THROWS_AS(recover_r(parse("sin(2*x)"), mid, g, options(4)), PreconditionError);
    Observations bad_phi = obs;
    bad_phi.phi0 = parse("t");
    CHECK_THROWS_AS(recover_r(parse("sin(x)"), bad_phi, g, options(4)), PreconditionError);
    Observations bad_chi = obs;
    bad_chi.chi = parse("1+cos(tau)");
    CHECK_THROWS_AS(recover_r(parse("sin(x)"), bad_chi, g, options(4)), PreconditionError);
    Observations bad_x = obs;
    bad_x.x0 = 0.0;
    CHECK_THROWS_AS(recover_r(parse("sin(x)"), bad_x, g, options(4)), DomainError);
}

TEST_CASE("response factors") {
    const Grid g(2.0, 16, 2000);
    const double t0 = 1.7;
    const std::vector<double> sym = response_factors(parse("1"), t0, 6, g);
    const std::vector<double> samp = response_factors(TimeSeries{g.times(), std::vector<double>(g.nt(), 1.0)}, t0, 6, g);
    for (int n = 1; n <= 6; ++n) {
        const double exact = (1 - std::cos(n * t0)) / (n * n);
        CHECK(sym[n - 1] == doctest::Approx(exact).epsilon(1e-13));
        CHECK(std::abs(samp[n - 1] - exact) < 1e-6);
    }
    CHECK_THROWS_AS(response_factors(parse("1"), 3.0, 4, g), DomainError);
}

TEST_CASE("recover f round trip") {
    const Grid g(1.0, 16, 400);
    const Expr f = parse("sin(x)-0.5*sin(3*x)+0.1*sin(4*x)");
    const Observations obs = make_observations(f, parse("1+t+cos(tau)"), 1.0, 0.9, g, options(6));
    const RecoveredSource rec = recover_f(parse("1+t"), 0.9, obs.psi, g, options(6));
    const std::vector<double> expected{1.0, 0.0, -0.5, 0.1, 0.0, 0.0};
    for (int n = 1; n <= 6; ++n) CHECK(std::abs(rec.f[n] - expected[n - 1]) < 1e-10);
    CHECK(rec.M0.empty());
}

TEST_CASE("degenerate modes: non-unique or unsolvable") {
    // r0 = 1, t0 = pi: Lambda_n = (1 - cos n pi)/n^2 vanishes for even n
    const Grid g(pi, 16, 400);
    const RecoveredSource ok = recover_f(parse("1"), pi, SineCoeffs{{2.0, 0.0, 2.0 / 9.0, 0.0}}, g, options(4));
    CHECK(ok.M0 == std::vector<int>{2, 4});
    CHECK(ok.non_unique(2));
    CHECK_FALSE(ok.non_unique(1));
    CHECK(ok.f[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ok.f[3] == doctest::Approx(1.0).epsilon(1e-12));
    try {
        recover_f(parse("1"), pi, SineCoeffs{{2.0, 1e-3, 2.0 / 9.0, 0.0}}, g, options(4));
        FAIL("no throw");
    } catch (const PreconditionError& e) {
        CHECK(e.mode() == 2);
    }
    CHECK_THROWS_AS(recover_f(parse("cos(t)"), pi / 2, SineCoeffs{{1.0}}, g, options(1)), PreconditionError);
}

TEST_CASE("inversion is deterministic") {
    const Grid g(1.0, 16, 200);
    const Expr f = parse("sin(x)*(1+t)");
    const Observations obs = make_observations(f, parse("1+cos(tau)"), 1.2, 1.0, g, options(4));
    const RecoveredSource a = recover_r(f, obs, g, options(4));
    const RecoveredSource b = recover_r(f, obs, g, options(4));
    CHECK(a.r0.values == b.r0.values);
    CHECK(a.r1.coeff(100, 1) == b.r1.coeff(100, 1));
}

TEST_CASE("joint recovery reproduces the observations") {
    const Grid g(1.0, 16, 800);
    const Expr f = parse("sin(x)+0.4*sin(2*x)");
    const Expr r = parse("1+t+(1+t/3)*cos(tau)");
    const double x0 = 1.0, t0 = 1.0;
    const Observations obs = make_observations(f, r, x0, t0, g, options(4));
    const JointRecovery jr = recover_joint(parse("1+t"), obs.chi, obs.psi, x0, t0, g, options(4));
    CHECK(jr.source.f[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(jr.source.f[2] == doctest::Approx(0.4).epsilon(1e-10));
    const auto& phi0 = std::get<TimeSeries>(obs.phi0);
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    for (std::size_t j = 0; j < g.nt(); ++j) {
        e0 = std::max(e0, std::abs(jr.phi0.values[j] - phi0.values[j]));
        e1 = std::max(e1, std::abs(jr.phi1.values[j] - obs.phi1.values[j]));
        e2 = std::max(e2, std::abs(jr.phi2.values[j] - obs.phi2.values[j]));
    }
    CHECK(e0 < 1e-5);
    CHECK(e1 < 1e-6);
    CHECK(e2 < 1e-6);
    for (std::size_t j = 0; j < g.nt(); j += 100)
        CHECK(jr.source.r1.coeff(j, 1).real() == doctest::Approx(0.5 * (1 + g.t(j) / 3)).epsilon(1e-9));
}

TEST_CASE("observation examples") {
    const Grid g(pi, 16, 1000);
    const Observations flat = make_observations(parse("sin(x)"), parse("1"), pi / 2, pi, g, options(4));
    const auto& phi0 = std::get<TimeSeries>(flat.phi0);
    const auto& chi = std::get<PeriodicProfile>(flat.chi);
    for (std::size_t j = 0; j < g.nt(); j += 50) {
        // trapezoid error ~ h^2 t / 6 with h = pi/1000
        CHECK(std::abs(phi0.values[j] - (1 - std::cos(g.t(j)))) < 5e-6);
        CHECK(std::abs(flat.phi1.values[j]) < 1e-12);
        CHECK(std::abs(flat.phi2.values[j]) < 1e-12);
        CHECK(chi.max_abs_coeff() < 1e-14);
    }
    const Observations osc = make_observations(parse("sin(x)"), parse("1+cos(tau)"), pi / 2, pi, g, options(4));
    for (double tau : {0.0, 1.0, 4.0})
        CHECK(std::get<PeriodicProfile>(osc.chi).at_node(300, tau) == doctest::Approx(-std::cos(tau)).scale(1.0));

    const Observations two = make_observations(parse("2*sin(x)"), parse("1"), 1.0, pi, g, options(4));
    CHECK(two.psi[1] == doctest::Approx(4.0).epsilon(1e-12));
    for (int n = 2; n <= 4; ++n) CHECK(std::abs(two.psi[n]) < 1e-12);
}

TEST_CASE("recover r examples") {
    const Grid g(1.0, 16, 2000);
    const Expr f = parse("sin(x)");
    {
        const Observations obs = make_observations(f, parse("1+t"), pi / 2, 1.0, g, options(4));
        const RecoveredSource rec = recover_r(f, obs, g, options(4));
        double err = 0.0;
        for (std::size_t j = 0; j < g.nt(); ++j) err = std::max(err, std::abs(rec.r0.values[j] - (1 + g.t(j))));
        CHECK(err <= 5e-4);
        // chi = 0 gives r1 = 0
        CHECK(rec.r1.max_abs_coeff() < 1e-14);
    }
    {
        const Observations obs = make_observations(f, parse("1+cos(tau)"), pi / 2, 1.0, g, options(4));
        const RecoveredSource rec = recover_r(f, obs, g, options(4));
        double err = 0.0;
        for (std::size_t j = 0; j < g.nt(); j += 7) {
            err = std::max(err, std::abs(rec.r1.coeff(j, 1) - Complex(0.5, 0.0)));
            for (int k = 2; k <= rec.r1.harmonics(); ++k) err = std::max(err, std::abs(rec.r1.coeff(j, k)));
        }
        CHECK(err <= 1e-10);
    }
}

TEST_CASE("recover f examples") {
    const Grid g(pi, 16, 400);
    const RecoveredSource rec = recover_f(parse("1"), pi, SineCoeffs{{4.0, 0.0, 0.0}}, g, options(3));
    REQUIRE(rec.lambda.size() == 3);
    CHECK(rec.lambda[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(rec.lambda[1]) < 1e-12);
    CHECK(rec.lambda[2] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    CHECK(rec.M0 == std::vector<int>{2});
    CHECK(rec.f[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rec.f[2] == 0.0);
    CHECK(std::abs(rec.f[3]) < 1e-12);
    CHECK_THROWS_AS(recover_f(parse("1"), pi, SineCoeffs{{4.0, 1.0, 0.0}}, g, options(3)), PreconditionError);

    // psi = Lambda at t0 = pi/2 (no degenerate mode below 4) gives f = 1
    const std::vector<double> lambda = response_factors(parse("1"), pi / 2, 3, g);
    const RecoveredSource ones = recover_f(parse("1"), pi / 2, SineCoeffs{lambda}, g, options(3));
    CHECK(ones.M0.empty());
    for (int n = 1; n <= 3; ++n) CHECK(ones.f[n] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("joint recovery examples") {
    const Grid g(1.0, 16, 800);
    const Expr f = parse("sin(x)+0.3*sin(2*x)");
    const double x0 = 1.0, t0 = 1.0;
    {
        const Observations obs = make_observations(f, parse("1+cos(tau)"), x0, t0, g, options(4));
        const JointRecovery jr = recover_joint(parse("1"), obs.chi, obs.psi, x0, t0, g, options(4));
        CHECK(std::abs(jr.source.f[1] - 1.0) < 1e-9);
        CHECK(std::abs(jr.source.f[2] - 0.3) < 1e-9);
        CHECK(std::abs(jr.source.f[3]) < 1e-9);
        CHECK(std::abs(jr.source.f[4]) < 1e-9);
    }
    {
        const Observations obs = make_observations(f, parse("1"), x0, t0, g, options(4));
        const JointRecovery jr = recover_joint(parse("1"), obs.chi, obs.psi, x0, t0, g, options(4));
        for (std::size_t j = 0; j < g.nt(); ++j) {
            CHECK(std::abs(jr.phi1.values[j]) < 1e-14);
            CHECK(std::abs(jr.phi2.values[j]) < 1e-14);
        }
    }
}

TEST_CASE("dichotomy over random data") {
    // r0 = 1, t0 = pi, N = 4: modes 2 and 4 are degenerate
    const Grid g(pi, 16, 200);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> psi(-1.0, 1.0);
    std::bernoulli_distribution clean(0.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> c(4);
        for (auto& v : c) v = psi(rng);
        const bool solvable = clean(rng);
        if (solvable) c[1] = c[3] = 0.0;
        if (solvable) {
            const RecoveredSource rec = recover_f(parse("1"), pi, SineCoeffs{c}, g, options(4));
            CHECK(rec.M0 == std::vector<int>{2, 4});
            CHECK(rec.f[1] == doctest::Approx(c[0] / 2.0).epsilon(1e-12));
            CHECK(rec.f[3] == doctest::Approx(c[2] * 9.0 / 2.0).epsilon(1e-12));
        } else {
            try {
                recover_f(parse("1"), pi, SineCoeffs{c}, g, options(4));
                FAIL("no throw");
            } catch (const PreconditionError& e) {
                CHECK(e.mode() == 2);
            }
        }
    }
}
