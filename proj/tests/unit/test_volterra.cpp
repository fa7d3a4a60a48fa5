#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "twoscale/errors.hpp"
#include "twoscale/volterra.hpp"

using namespace twoscale;

namespace {

std::vector<double> uniform_times(double T, std::size_t M) {
    std::vector<double> t(M + 1);
    for (std::size_t j = 0; j <= M; ++j) t[j] = T * double(j) / double(M);
    return t;
}

// u = exp(-t), K = exp(t - s): g = exp(-t) + (exp(t) - exp(-t)) / 2
VolterraProblem manufactured(std::size_t M) {
    VolterraProblem p;
    p.times = uniform_times(1.0, M);
    p.kernel = [](double t, double s) { return std::exp(t - s); };
    for (double t : p.times) p.rhs.push_back(std::exp(-t) + 0.5 * (std::exp(t) - std::exp(-t)));
    return p;
}

double max_error(const std::vector<double>& u, const std::vector<double>& times) {
    double e = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) e = std::max(e, std::abs(u[j] - std::exp(-times[j])));
    return e;
}

}  // namespace

TEST_CASE("zero kernel returns the right-hand side") {
    VolterraProblem p;
    p.times = uniform_times(2.0, 10);
    p.kernel = [](double, double) { return 0.0; };
    for (double t : p.times) p.rhs.push_back(std::cos(3 * t));
    CHECK(solve_second_kind(p) == p.rhs);
}

TEST_CASE("unit kernel gives exp(-t)") {
    VolterraProblem p;
    p.times = uniform_times(1.0, 400);
    p.kernel = [](double, double) { return 1.0; };
    p.rhs.assign(p.times.size(), 1.0);
    CHECK(max_error(solve_second_kind(p), p.times) < 1e-6);
}

TEST_CASE("second-order convergence on a manufactured problem") {
    const VolterraProblem a = manufactured(100);
    const VolterraProblem b = manufactured(200);
    const double ea = max_error(solve_second_kind(a), a.times);
    const double eb = max_error(solve_second_kind(b), b.times);
    CHECK(ea / eb == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("causality") {
    VolterraProblem p = manufactured(64);
    const std::vector<double> u = solve_second_kind(p);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise;
    for (std::size_t j = 33; j < p.rhs.size(); ++j) p.rhs[j] += noise(rng);
    const std::vector<double> v = solve_second_kind(p);
    for (std::size_t j = 0; j < 33; ++j) CHECK(u[j] == v[j]);
    CHECK(u[33] != v[33]);
}

TEST_CASE("row evaluator and precompute give the same answer") {
    const VolterraProblem base = manufactured(80);
    const std::vector<double> u = solve_second_kind(base);

    VolterraProblem pre = base;
    pre.precompute = true;
    const std::vector<double> u_pre = solve_second_kind(pre);

    VolterraProblem rows = base;
    rows.kernel_row = [&](std::size_t j, std::span<double> row) {
        for (std::size_t i = 0; i <= j; ++i) row[i] = base.kernel(base.times[j], base.times[i]);
    };
    rows.kernel = nullptr;
    const std::vector<double> u_rows = solve_second_kind(rows);
    for (std::size_t j = 0; j < u.size(); ++j) {
        CHECK(u_pre[j] == doctest::Approx(u[j]).epsilon(1e-14));
        CHECK(u_rows[j] == doctest::Approx(u[j]).epsilon(1e-14));
    }
}

TEST_CASE("input validation") {
    VolterraProblem p = manufactured(10);
    p.rhs.pop_back();
    CHECK_THROWS_AS(solve_second_kind(p), DomainError);

    VolterraProblem q = manufactured(10);
    q.times[3] += 1e-3;
    CHECK_THROWS_AS(solve_second_kind(q), DomainError);

    // 1 + h K_jj / 2 = 0
    VolterraProblem s = manufactured(10);
    s.kernel = [](double, double) { return -20.0; };
    CHECK_THROWS_AS(solve_second_kind(s), PreconditionError);
}

TEST_CASE("manufactured 1 + t^2 with a sine kernel") {
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto kernel = [](double t, double s) { return -std::sin(t - s); };
    auto exact = [](double t) { return 1 + t * t; };
    auto error = [&](std::size_t M) {
        VolterraProblem p;
        p.times = uniform_times(2.0, M);
        p.kernel = kernel;
        for (double t : p.times) {
            const double integral = gk::integrate([&](double s) { return kernel(t, s) * exact(s); }, 0.0, t, 8, 1e-14);
            p.rhs.push_back(exact(t) + integral);
            // the convolution has the closed form 2 - cos t
            CHECK(p.rhs.back() == doctest::Approx(2 - std::cos(t)).epsilon(1e-13));
        }
        const std::vector<double> u = solve_second_kind(p);
        double e = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) e = std::max(e, std::abs(u[j] - exact(p.times[j])));
        return e;
    };
    const double coarse = error(100);
    const double fine = error(200);
    CHECK(fine < 1e-4);
    CHECK(fine / coarse >= 0.2);
    CHECK(fine / coarse <= 0.3);
}
