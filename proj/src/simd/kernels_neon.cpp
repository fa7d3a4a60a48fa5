#include <arm_neon.h>

#include "kernels.hpp"

namespace twoscale::simd::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_neon(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = dot_neon(a + r * cols, x, cols);
}

void rk4_neon(double* y, double* v, const double* k, const double* g0, const double* gm, const double* g1,
              double dt, std::size_t n) {
    const float64x2_t h2 = vdupq_n_f64(0.5 * dt);
    const float64x2_t h = vdupq_n_f64(dt);
    const float64x2_t s = vdupq_n_f64(dt / 6.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t yy = vld1q_f64(y + i);
        const float64x2_t vv = vld1q_f64(v + i);
        const float64x2_t kk = vld1q_f64(k + i);

        const float64x2_t k1y = vv;
        const float64x2_t k1v = vfmsq_f64(vld1q_f64(g0 + i), kk, yy);
        const float64x2_t k2y = vfmaq_f64(vv, h2, k1v);
        const float64x2_t k2v = vfmsq_f64(vld1q_f64(gm + i), kk, vfmaq_f64(yy, h2, k1y));
        const float64x2_t k3y = vfmaq_f64(vv, h2, k2v);
        const float64x2_t k3v = vfmsq_f64(vld1q_f64(gm + i), kk, vfmaq_f64(yy, h2, k2y));
        const float64x2_t k4y = vfmaq_f64(vv, h, k3v);
        const float64x2_t k4v = vfmsq_f64(vld1q_f64(g1 + i), kk, vfmaq_f64(yy, h, k3y));

        const float64x2_t sy = vaddq_f64(vfmaq_f64(k1y, two, vaddq_f64(k2y, k3y)), k4y);
        const float64x2_t sv = vaddq_f64(vfmaq_f64(k1v, two, vaddq_f64(k2v, k3v)), k4v);
        vst1q_f64(y + i, vfmaq_f64(yy, s, sy));
        vst1q_f64(v + i, vfmaq_f64(vv, s, sv));
    }
    for (; i < n; ++i) rk4_oscillator_scalar(y[i], v[i], k[i], g0[i], gm[i], g1[i], dt);
}

}  // namespace

const KernelTable* neon_kernels() noexcept {
    static const KernelTable table{dot_neon, axpy_neon, matvec_neon, rk4_neon};
    return &table;
}

}  // namespace twoscale::simd::detail
