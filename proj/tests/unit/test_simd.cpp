#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "twoscale/errors.hpp"
#include "twoscale/simd.hpp"

using namespace twoscale;
using simd::Backend;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<Backend> vector_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::avx2, Backend::neon})
        if (simd::available(b)) out.push_back(b);
    return out;
}

}  // namespace

TEST_CASE("scalar backend is always available") {
    CHECK(simd::available(Backend::scalar));
    simd::BackendGuard g(Backend::scalar);
    CHECK(simd::active_backend() == Backend::scalar);
}

TEST_CASE("unavailable backend is rejected") {
    for (Backend b : {Backend::avx2, Backend::neon})
        if (!simd::available(b)) CHECK_THROWS_AS(simd::set_backend(b), DomainError);
}

TEST_CASE("vector kernels match the scalar reference") {
    std::mt19937_64 rng(42);
    for (Backend b : vector_backends()) {
        CAPTURE(simd::name(b));
        // Lengths around the vector width exercise the remainder loops.
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
            const auto a = random_vector(rng, n);
            const auto x = random_vector(rng, n);
            double ref = 0.0;
            std::vector<double> y_ref = x;
            {
                simd::BackendGuard g(Backend::scalar);
                ref = simd::dot(a, x);
                simd::axpy(0.37, a, y_ref);
            }
            simd::BackendGuard g(b);
            CHECK(simd::dot(a, x) == doctest::Approx(ref).epsilon(1e-13).scale(double(n) + 1));
            std::vector<double> y = x;
            simd::axpy(0.37, a, y);
            for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(y_ref[i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("matvec matches the scalar reference") {
    std::mt19937_64 rng(43);
    for (Backend b : vector_backends()) {
        for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 3}, {7, 9}, {33, 64}}) {
            const auto a = random_vector(rng, rows * cols);
            const auto x = random_vector(rng, cols);
            std::vector<double> ref(rows), out(rows);
            {
                simd::BackendGuard g(Backend::scalar);
                simd::matvec(a, rows, cols, x, ref);
            }
            simd::BackendGuard g(b);
            simd::matvec(a, rows, cols, x, out);
            for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(out[r] - ref[r]) <= 1e-13 * double(cols));
        }
    }
}

TEST_CASE("rk4 step matches the scalar reference") {
    std::mt19937_64 rng(44);
    for (Backend b : vector_backends()) {
        for (std::size_t n : {1u, 4u, 6u, 13u, 64u}) {
            std::vector<double> k(n);
            for (std::size_t i = 0; i < n; ++i) k[i] = double((i + 1) * (i + 1));
            const auto g0 = random_vector(rng, n), g1 = random_vector(rng, n), g2 = random_vector(rng, n);
            auto y_ref = random_vector(rng, n), v_ref = random_vector(rng, n);
            auto y = y_ref, v = v_ref;
            {
                simd::BackendGuard g(Backend::scalar);
                for (int s = 0; s < 10; ++s) simd::rk4_oscillators(y_ref, v_ref, k, g0, g1, g2, 1e-3);
            }
            simd::BackendGuard g(b);
            for (int s = 0; s < 10; ++s) simd::rk4_oscillators(y, v, k, g0, g1, g2, 1e-3);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(y[i] == doctest::Approx(y_ref[i]).epsilon(1e-13));
                CHECK(v[i] == doctest::Approx(v_ref[i]).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("rk4 step integrates a free oscillator") {
    // y'' + 4y = 0, y(0) = 1, v(0) = 0 -> cos(2t)
    std::vector<double> y{1.0}, v{0.0}, k{4.0}, g{0.0};
    const double dt = 1e-3;
    for (int s = 0; s < 1000; ++s) simd::rk4_oscillators(y, v, k, g, g, g, dt);
    CHECK(y[0] == doctest::Approx(std::cos(2.0)).epsilon(1e-10));
    CHECK(v[0] == doctest::Approx(-2.0 * std::sin(2.0)).epsilon(1e-10));
}
