#include "clinicsum/simd.hpp"

#include "clinicsum/errors.hpp"

namespace clinicsum::simd {

namespace {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*squared_norm)(const double*, std::size_t);
    void (*scale)(double*, std::size_t, double);
};

constexpr KernelTable kScalar{scalar_impl::dot, scalar_impl::squared_norm, scalar_impl::scale};

#ifdef CLINICSUM_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{avx2_impl::dot, avx2_impl::squared_norm, avx2_impl::scale};
#endif
#ifdef CLINICSUM_HAVE_NEON_KERNELS
constexpr KernelTable kNeon{neon_impl::dot, neon_impl::squared_norm, neon_impl::scale};
#endif

bool cpu_supports(Backend backend) {
    switch (backend) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(CLINICSUM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") != 0;
#else
        return false;
#endif
    case Backend::neon:
        // NEON is mandatory on aarch64.
#ifdef CLINICSUM_HAVE_NEON_KERNELS
        return true;
#else
        return false;
#endif
    }
    return false;
}

Backend detect() {
#ifdef CLINICSUM_HAVE_AVX2_KERNELS
    if (cpu_supports(Backend::avx2)) {
        return Backend::avx2;
    }
#endif
#ifdef CLINICSUM_HAVE_NEON_KERNELS
    return Backend::neon;
#endif
    return Backend::scalar;
}

const KernelTable& table_for(Backend backend) {
    switch (backend) {
#ifdef CLINICSUM_HAVE_AVX2_KERNELS
    case Backend::avx2:
        return kAvx2;
#endif
#ifdef CLINICSUM_HAVE_NEON_KERNELS
    case Backend::neon:
        return kNeon;
#endif
    default:
        return kScalar;
    }
}

Backend g_backend = detect();
const KernelTable* g_kernels = &table_for(g_backend);

} // namespace

Backend active_backend() {
    return g_backend;
}

void set_backend(Backend backend) {
    if (!backend_available(backend)) {
        throw ConfigError("simd backend not available: " + backend_name(backend));
    }
    g_backend = backend;
    g_kernels = &table_for(backend);
}

bool backend_available(Backend backend) {
    return cpu_supports(backend);
}

std::string backend_name(Backend backend) {
    switch (backend) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    case Backend::neon:
        return "neon";
    }
    return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot: size mismatch " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    }
    return g_kernels->dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
    return g_kernels->squared_norm(a.data(), a.size());
}

void scale(std::span<double> a, double factor) {
    g_kernels->scale(a.data(), a.size(), factor);
}

} // namespace clinicsum::simd
