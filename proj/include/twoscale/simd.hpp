#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops of the solvers. Each kernel has a scalar
// reference implementation and vectorized variants (AVX2+FMA on x86-64,
// NEON on aarch64); the variant is chosen once at startup from the CPU
// features and may be overridden with TWOSCALE_SIMD=scalar|avx2|neon.
// Variants agree with the scalar reference up to floating-point
// reassociation, not bit for bit.

namespace twoscale::simd {

enum class Backend { scalar, avx2, neon };

std::string_view name(Backend b) noexcept;

// Compiled in and supported by the running CPU.
bool available(Backend b) noexcept;

Backend active_backend() noexcept;

// Throws DomainError when the backend is not available.
void set_backend(Backend b);

// Scoped backend override for tests and benchmarks.
class BackendGuard {
  public:
    explicit BackendGuard(Backend b) : saved_(active_backend()) { set_backend(b); }
    ~BackendGuard() { set_backend(saved_); }
    BackendGuard(const BackendGuard&) = delete;
    BackendGuard& operator=(const BackendGuard&) = delete;

  private:
    Backend saved_;
};

double dot(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// out[r] = sum_c a[r * cols + c] * x[c], a row-major rows x cols.
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> out);

/// One classical RK4 step of the decoupled oscillators
/// y_i'' + stiffness_i * y_i = g_i(t), all advanced by the same dt.
/// `g_start`, `g_mid`, `g_end` hold the forcing at t, t + dt/2, t + dt.
void rk4_oscillators(std::span<double> y, std::span<double> v, std::span<const double> stiffness,
                     std::span<const double> g_start, std::span<const double> g_mid,
                     std::span<const double> g_end, double dt);

}  // namespace twoscale::simd
