#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clinicsum {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    double norm() const;
    // True when the vector could not be normalized (all-zero), e.g. the
    // embedding of a text with no word tokens.
    bool is_zero() const;

    bool operator==(const EmbeddingVector&) const = default;
};

// In-place L2 normalization. Returns false and leaves the vector untouched
// when it is zero.
bool normalize(EmbeddingVector& v);

double dot(const EmbeddingVector& a, const EmbeddingVector& b);

// dot(a,b) / (|a||b|), clamped to [-1, 1]. Throws DimensionError on dim
// mismatch and ZeroVectorError if either argument is zero.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Embedding model contract. Implementations must be deterministic for a
// fixed model version and shareable across concurrent batch requests.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual const std::string& name() const = 0;
    virtual std::size_t dim() const = 0;
    // Raw vectors, one per input, order-preserving. Validation and
    // normalization happen in embed_batch().
    virtual std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) = 0;
};

// Validated batch embedding: rejects empty batches and empty texts
// (PreconditionError), checks every vector against provider.dim()
// (DimensionError) and for non-finite entries (ProviderError), then
// L2-normalizes each vector. Zero vectors stay zero, flagged via is_zero().
std::vector<EmbeddingVector> embed_batch(EmbeddingProvider& provider,
                                         const std::vector<std::string>& texts);

EmbeddingVector embed_one(EmbeddingProvider& provider, const std::string& text);

// Deterministic offline embedder: each lowercase word token is hashed to a
// unit pseudo-random vector with a fixed seeded hash, token vectors are
// averaged and the result L2-normalized. The hash scheme (FNV-1a 64 over the
// token, splitmix64 stream) is part of the public contract; golden files
// depend on it.
class TestEmbedder final : public EmbeddingProvider {
public:
    explicit TestEmbedder(std::size_t dim);

    const std::string& name() const override;
    std::size_t dim() const override;
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) override;

    // Single-text embedding, averaged over token vectors, normalized.
    // Empty/tokenless text yields the zero vector.
    EmbeddingVector embed(std::string_view text) const;

private:
    std::size_t dim_;
    std::string name_;
};

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{250};
    double backoff_multiplier = 2.0;
};

struct HttpEmbeddingConfig {
    std::string base_url; // e.g. "http://localhost:8080" or "https://host/v1prefix"
    std::string model;
    std::size_t dim = 0;
    std::chrono::seconds timeout{30};
    RetryPolicy retry;
    std::string api_key_env = "CLINICSUM_EMBED_API_KEY";
};

// POST {base_url}/v1/embeddings with {"model", "input": [...]}, reading
// {"data": [{"index", "embedding"}]}. Bearer token taken from the configured
// environment variable when set. Transient failures are retried with
// exponential backoff; persistent ones surface as ProviderError.
class HttpEmbeddingClient final : public EmbeddingProvider {
public:
    explicit HttpEmbeddingClient(HttpEmbeddingConfig config);

    const std::string& name() const override;
    std::size_t dim() const override;
    std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) override;

private:
    HttpEmbeddingConfig config_;
    std::string name_;
};

} // namespace clinicsum
