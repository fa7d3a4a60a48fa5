#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels.hpp"
#include "twoscale/errors.hpp"
#include "twoscale/simd.hpp"

namespace twoscale::simd {

namespace detail {

#if !defined(TWOSCALE_HAVE_AVX2)
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif
#if !defined(TWOSCALE_HAVE_NEON)
const KernelTable* neon_kernels() noexcept { return nullptr; }
#endif

}  // namespace detail

namespace {

bool cpu_supports(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(TWOSCALE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::neon:
#if defined(TWOSCALE_HAVE_NEON)
            return true;  // mandatory on aarch64
#else
            return false;
#endif
    }
    return false;
}

const detail::KernelTable* table_for(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return &detail::scalar_kernels();
        case Backend::avx2: return detail::avx2_kernels();
        case Backend::neon: return detail::neon_kernels();
    }
    return nullptr;
}

Backend detect() noexcept {
    if (const char* env = std::getenv("TWOSCALE_SIMD")) {
        const std::string want(env);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
            if (want == name(b) && available(b)) return b;
    }
    if (available(Backend::avx2)) return Backend::avx2;
    if (available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

struct State {
    std::atomic<Backend> backend{detect()};
    std::atomic<const detail::KernelTable*> table{table_for(backend.load())};
};

State& state() {
    static State s;
    return s;
}

const detail::KernelTable& kernels() { return *state().table.load(std::memory_order_relaxed); }

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DomainError(std::string(what) + ": operand sizes differ");
}

}  // namespace

std::string_view name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

bool available(Backend b) noexcept { return table_for(b) != nullptr && cpu_supports(b); }

Backend active_backend() noexcept { return state().backend.load(); }

void set_backend(Backend b) {
    if (!available(b)) throw DomainError("SIMD backend '" + std::string(name(b)) + "' is not available");
    state().backend.store(b);
    state().table.store(table_for(b));
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "dot");
    return kernels().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_size(x.size(), y.size(), "axpy");
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> out) {
    require_same_size(a.size(), rows * cols, "matvec");
    require_same_size(x.size(), cols, "matvec");
    require_same_size(out.size(), rows, "matvec");
    kernels().matvec(a.data(), rows, cols, x.data(), out.data());
}

void rk4_oscillators(std::span<double> y, std::span<double> v, std::span<const double> stiffness,
                     std::span<const double> g_start, std::span<const double> g_mid, std::span<const double> g_end,
                     double dt) {
    const std::size_t n = y.size();
    for (std::size_t s : {v.size(), stiffness.size(), g_start.size(), g_mid.size(), g_end.size()})
        require_same_size(n, s, "rk4_oscillators");
    kernels().rk4_oscillators(y.data(), v.data(), stiffness.data(), g_start.data(), g_mid.data(), g_end.data(), dt,
                              n);
}

}  // namespace twoscale::simd
