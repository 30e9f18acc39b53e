#pragma once

#include <cstddef>
#include <span>
#include <string>

// Vector arithmetic kernels used by the dense retrieval and embedding-score
// inner loops. A scalar reference implementation is always built; AVX2 (x86)
// and NEON (aarch64) variants are compiled when the target supports them and
// one is selected at startup based on runtime CPU capabilities.

namespace clinicsum::simd {

enum class Backend { scalar, avx2, neon };

// Backend chosen by CPU detection (or overridden via set_backend()).
Backend active_backend();

// Force a specific backend. Throws clinicsum::ConfigError if the requested
// backend was not compiled in or the CPU lacks the feature. Intended for
// tests and benchmarking.
void set_backend(Backend backend);

std::string backend_name(Backend backend);
bool backend_available(Backend backend);

// Dispatched entry points. Spans must have equal length where applicable.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
void scale(std::span<double> a, double factor);

// Reference kernels; the dispatched variants must agree with these within
// floating-point reassociation tolerance (equivalence-tested).
namespace scalar_impl {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void scale(double* a, std::size_t n, double factor);
} // namespace scalar_impl

#if defined(__x86_64__) || defined(_M_X64)
#define CLINICSUM_HAVE_AVX2_KERNELS 1
namespace avx2_impl {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void scale(double* a, std::size_t n, double factor);
} // namespace avx2_impl
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define CLINICSUM_HAVE_NEON_KERNELS 1
namespace neon_impl {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
void scale(double* a, std::size_t n, double factor);
} // namespace neon_impl
#endif

} // namespace clinicsum::simd
