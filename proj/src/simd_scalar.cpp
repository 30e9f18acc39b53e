#include "clinicsum/simd.hpp"

namespace clinicsum::simd::scalar_impl {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double squared_norm(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * a[i];
    }
    return acc;
}

void scale(double* a, std::size_t n, double factor) {
    for (std::size_t i = 0; i < n; ++i) {
        a[i] *= factor;
    }
}

} // namespace clinicsum::simd::scalar_impl
