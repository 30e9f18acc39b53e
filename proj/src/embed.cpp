#include "clinicsum/embed.hpp"

#include <algorithm>
#include <cmath>

#include "clinicsum/errors.hpp"
#include "clinicsum/simd.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

double EmbeddingVector::norm() const {
    return std::sqrt(simd::squared_norm(values));
}

bool EmbeddingVector::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

bool normalize(EmbeddingVector& v) {
    const double n = v.norm();
    if (n == 0.0) {
        return false;
    }
    simd::scale(v.values, 1.0 / n);
    return true;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("vector dim mismatch: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    return simd::dot(a.values, b.values);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("cosine: dim mismatch " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        throw ZeroVectorError("cosine is undefined for the zero vector");
    }
    const double c = simd::dot(a.values, b.values) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

std::vector<EmbeddingVector> embed_batch(EmbeddingProvider& provider,
                                         const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw PreconditionError("embed_batch: empty batch");
    }
    for (const auto& text : texts) {
        if (text.empty()) {
            throw PreconditionError("embed_batch: empty text in batch");
        }
    }
    auto vectors = provider.embed_raw(std::span<const std::string>(texts));
    if (vectors.size() != texts.size()) {
        throw ProviderError("provider " + provider.name() + " returned " +
                            std::to_string(vectors.size()) + " vectors for " +
                            std::to_string(texts.size()) + " texts");
    }
    for (auto& v : vectors) {
        if (v.dim() != provider.dim()) {
            throw DimensionError("provider " + provider.name() + " returned dim " +
                                 std::to_string(v.dim()) + ", expected " +
                                 std::to_string(provider.dim()));
        }
        for (double x : v.values) {
            if (!std::isfinite(x)) {
                throw ProviderError("provider " + provider.name() + " returned non-finite entry");
            }
        }
        normalize(v);
    }
    return vectors;
}

EmbeddingVector embed_one(EmbeddingProvider& provider, const std::string& text) {
    return embed_batch(provider, {text}).front();
}

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;
// Fixed stream seed; changing it invalidates every golden vector.
constexpr std::uint64_t kStreamSeed = 0x6A09E667F3BCC909ull;

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform in [-1, 1).
double to_unit_interval(std::uint64_t x) {
    return static_cast<double>(x >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

} // namespace

TestEmbedder::TestEmbedder(std::size_t dim) : dim_(dim), name_("test-hash-" + std::to_string(dim)) {
    if (dim_ < 2) {
        throw ConfigError("embedding dim must be >= 2, got " + std::to_string(dim_));
    }
}

const std::string& TestEmbedder::name() const {
    return name_;
}

std::size_t TestEmbedder::dim() const {
    return dim_;
}

EmbeddingVector TestEmbedder::embed(std::string_view text) const {
    EmbeddingVector out;
    out.values.assign(dim_, 0.0);
    const auto tokens = word_tokens(text);
    if (tokens.empty()) {
        return out;
    }
    std::vector<double> token_vec(dim_);
    for (const auto& token : tokens) {
        std::uint64_t state = fnv1a64(token) ^ kStreamSeed;
        for (std::size_t i = 0; i < dim_; ++i) {
            token_vec[i] = to_unit_interval(splitmix64(state));
        }
        const double n = std::sqrt(simd::squared_norm(token_vec));
        if (n == 0.0) {
            continue; // astronomically unlikely; skip rather than divide by zero
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            out.values[i] += token_vec[i] / n;
        }
    }
    simd::scale(out.values, 1.0 / static_cast<double>(tokens.size()));
    normalize(out);
    return out;
}

std::vector<EmbeddingVector> TestEmbedder::embed_raw(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        out.push_back(embed(text));
    }
    return out;
}

} // namespace clinicsum
