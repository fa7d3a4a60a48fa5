// Compiled with -mavx2 -mfma; only reached after the dispatcher has checked
// the CPU for both features.

#include <immintrin.h>

#include "kernels.hpp"

namespace twoscale::simd::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = dot_avx2(a + r * cols, x, cols);
}

void rk4_avx2(double* y, double* v, const double* k, const double* g0, const double* gm, const double* g1,
              double dt, std::size_t n) {
    const __m256d h2 = _mm256_set1_pd(0.5 * dt);
    const __m256d h = _mm256_set1_pd(dt);
    const __m256d s = _mm256_set1_pd(dt / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yy = _mm256_loadu_pd(y + i);
        const __m256d vv = _mm256_loadu_pd(v + i);
        const __m256d kk = _mm256_loadu_pd(k + i);
        const __m256d gs = _mm256_loadu_pd(g0 + i);
        const __m256d gmid = _mm256_loadu_pd(gm + i);
        const __m256d ge = _mm256_loadu_pd(g1 + i);

        const __m256d k1y = vv;
        const __m256d k1v = _mm256_fnmadd_pd(kk, yy, gs);
        const __m256d k2y = _mm256_fmadd_pd(h2, k1v, vv);
        const __m256d k2v = _mm256_fnmadd_pd(kk, _mm256_fmadd_pd(h2, k1y, yy), gmid);
        const __m256d k3y = _mm256_fmadd_pd(h2, k2v, vv);
        const __m256d k3v = _mm256_fnmadd_pd(kk, _mm256_fmadd_pd(h2, k2y, yy), gmid);
        const __m256d k4y = _mm256_fmadd_pd(h, k3v, vv);
        const __m256d k4v = _mm256_fnmadd_pd(kk, _mm256_fmadd_pd(h, k3y, yy), ge);

        const __m256d sy = _mm256_add_pd(_mm256_fmadd_pd(two, _mm256_add_pd(k2y, k3y), k1y), k4y);
        const __m256d sv = _mm256_add_pd(_mm256_fmadd_pd(two, _mm256_add_pd(k2v, k3v), k1v), k4v);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(s, sy, yy));
        _mm256_storeu_pd(v + i, _mm256_fmadd_pd(s, sv, vv));
    }
    for (; i < n; ++i) rk4_oscillator_scalar(y[i], v[i], k[i], g0[i], gm[i], g1[i], dt);
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
    static const KernelTable table{dot_avx2, axpy_avx2, matvec_avx2, rk4_avx2};
    return &table;
}

}  // namespace twoscale::simd::detail
