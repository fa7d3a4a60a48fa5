#pragma once

#include <cstddef>

namespace twoscale::simd::detail {

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*matvec)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out);
    void (*rk4_oscillators)(double* y, double* v, const double* stiffness, const double* g0, const double* gm,
                            const double* g1, double dt, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the variant is not compiled into this build.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

// Scalar tail shared by the vector variants.
inline void rk4_oscillator_scalar(double& y, double& v, double k, double g0, double gm, double g1, double dt) {
    const double h2 = 0.5 * dt;
    const double k1y = v;
    const double k1v = g0 - k * y;
    const double k2y = v + h2 * k1v;
    const double k2v = gm - k * (y + h2 * k1y);
    const double k3y = v + h2 * k2v;
    const double k3v = gm - k * (y + h2 * k2y);
    const double k4y = v + dt * k3v;
    const double k4v = g1 - k * (y + dt * k3y);
    const double s = dt / 6.0;
    y += s * (k1y + 2.0 * (k2y + k3y) + k4y);
    v += s * (k1v + 2.0 * (k2v + k3v) + k4v);
}

}  // namespace twoscale::simd::detail
