#include "kernels.hpp"

namespace twoscale::simd::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = dot_scalar(a + r * cols, x, cols);
}

void rk4_scalar(double* y, double* v, const double* k, const double* g0, const double* gm, const double* g1,
                double dt, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) rk4_oscillator_scalar(y[i], v[i], k[i], g0[i], gm[i], g1[i], dt);
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{dot_scalar, axpy_scalar, matvec_scalar, rk4_scalar};
    return table;
}

}  // namespace twoscale::simd::detail
