#include <doctest.h>

#include <random>
#include <vector>

#include "clinicsum/errors.hpp"
#include "clinicsum/simd.hpp"

using namespace clinicsum;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

} // namespace

TEST_CASE("scalar kernels: hand-checked values") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {4.0, -5.0, 6.0};
    CHECK(simd::scalar_impl::dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
    CHECK(simd::scalar_impl::squared_norm(a.data(), 3) == doctest::Approx(14.0));
    std::vector<double> c = a;
    simd::scalar_impl::scale(c.data(), 3, 2.0);
    CHECK(c == std::vector<double>{2.0, 4.0, 6.0});
}

TEST_CASE("dispatched kernels agree with the scalar reference") {
    std::mt19937_64 rng(7);
    // Lengths straddle the vector width and remainder handling.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 64u, 1000u, 1023u}) {
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        const double ref_dot = simd::scalar_impl::dot(a.data(), b.data(), n);
        const double ref_sq = simd::scalar_impl::squared_norm(a.data(), n);
        CHECK(simd::dot(a, b) == doctest::Approx(ref_dot).epsilon(1e-12));
        CHECK(simd::squared_norm(a) == doctest::Approx(ref_sq).epsilon(1e-12));

        auto scaled_ref = a;
        simd::scalar_impl::scale(scaled_ref.data(), n, 0.5);
        auto scaled = a;
        simd::scale(scaled, 0.5);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(scaled[i] == scaled_ref[i]); // pure multiply, bit-exact
        }
    }
}

#ifdef CLINICSUM_HAVE_AVX2_KERNELS
TEST_CASE("avx2 kernels agree with the scalar reference" *
          doctest::skip(!simd::backend_available(simd::Backend::avx2))) {
    std::mt19937_64 rng(13);
    for (std::size_t n : {1u, 3u, 4u, 8u, 11u, 12u, 16u, 33u, 255u, 256u, 511u}) {
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        const double ref = simd::scalar_impl::dot(a.data(), b.data(), n);
        const double got = simd::avx2_impl::dot(a.data(), b.data(), n);
        CHECK(got == doctest::Approx(ref).epsilon(1e-12));
        CHECK(simd::avx2_impl::squared_norm(a.data(), n) ==
              doctest::Approx(simd::scalar_impl::squared_norm(a.data(), n)).epsilon(1e-12));
        auto scaled = a;
        simd::avx2_impl::scale(scaled.data(), n, -1.25);
        auto scaled_ref = a;
        simd::scalar_impl::scale(scaled_ref.data(), n, -1.25);
        CHECK(scaled == scaled_ref);
    }
}
#endif

TEST_CASE("backend can be pinned and restored") {
    const auto original = simd::active_backend();
    simd::set_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    const std::vector<double> a = {1.0, 2.0};
    CHECK(simd::dot(a, a) == doctest::Approx(5.0));
    simd::set_backend(original);
    CHECK(simd::active_backend() == original);
}

TEST_CASE("dot rejects mismatched lengths") {
    const std::vector<double> a = {1.0, 2.0};
    const std::vector<double> b = {1.0};
    CHECK_THROWS_AS(simd::dot(a, b), DimensionError);
}
