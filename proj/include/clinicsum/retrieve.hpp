#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clinicsum/index.hpp"

namespace clinicsum {

// The retrieval prompt the filtering stage runs against.
inline constexpr const char* kDefaultRetrievalQuery =
    "Extract subjective, objective, assessment, and plan details from a given transcript";

struct RetrievalQuery {
    std::string text = kDefaultRetrievalQuery;
    // Computed lazily from text when absent.
    std::optional<EmbeddingVector> vector;
};

struct FusionConfig {
    double w_sparse = 0.5;
    double w_dense = 0.5; // w_sparse + w_dense must equal 1
    double rrf_lambda = 60.0;
    std::size_t top_k_per_retriever = 15;
    std::size_t top_k_final = 17;

    void validate() const; // throws ConfigError
};

// One entry of a single retriever's ranked list; ranks are 1-based.
struct ScoredRank {
    std::size_t chunk_ord = 0;
    double score = 0.0;
    std::size_t rank = 0;
};

struct RankedCandidate {
    std::size_t chunk_ord = 0;
    std::optional<std::size_t> sparse_rank;
    std::optional<std::size_t> dense_rank;
    std::optional<double> sparse_score; // raw scores kept for audit only
    std::optional<double> dense_score;
    double fused_score = 0.0;
};

struct FusedContext {
    std::vector<Chunk> selected; // original-order subset, ords strictly increasing
    std::string concatenated_text;
    std::vector<RankedCandidate> candidates; // full fused list for audit
};

// Okapi BM25 score per chunk:
//   score(d) = sum_t idf(t) * tf*(k1+1) / (tf + k1*(1 - b + b*doclen/avgdl))
//   idf(t)   = ln(1 + (N - df + 0.5)/(df + 0.5))
// Query terms absent from the corpus contribute 0.
std::vector<double> bm25_scores(const ChunkIndex& index, const std::string& query_text);

// Chunks with positive BM25 score, descending, ties by ascending ord,
// truncated to k, ranks 1..len. May return fewer than k.
std::vector<ScoredRank> sparse_retrieve(const ChunkIndex& index, const std::string& query_text,
                                        std::size_t k);

// Every chunk scored by cosine against the query vector (exact scan over the
// normalized index vectors), descending, ties by ascending ord, top k.
std::vector<ScoredRank> dense_retrieve(const ChunkIndex& index, const RetrievalQuery& query,
                                       std::size_t k);

// Weighted reciprocal rank fusion over the union of both lists:
//   fused(c) = w_sparse/(lambda + sparse_rank) + w_dense/(lambda + dense_rank)
// with a missing retriever contributing 0. Sorted by fused score descending,
// ties by ascending ord. Candidates whose fused score is 0 (possible only
// under a zero weight) are dropped.
std::vector<RankedCandidate> rrf_fuse(const std::vector<ScoredRank>& sparse_ranked,
                                      const std::vector<ScoredRank>& dense_ranked,
                                      const FusionConfig& cfg);

// Keep the top_k_final fused candidates, then restore original transcript
// order before concatenating with single spaces.
FusedContext reconstruct_context(const ChunkIndex& index,
                                 const std::vector<RankedCandidate>& fused,
                                 std::size_t top_k_final);

// End-to-end retriever-based filtering:
// build_index -> sparse + dense retrieval -> rrf_fuse -> reconstruct_context.
FusedContext filter_transcript(const Transcript& transcript, EmbeddingProvider& provider,
                               RetrievalQuery query, const FusionConfig& cfg, double k1 = 1.2,
                               double b = 0.75);

FusedContext filter_index(const ChunkIndex& index, EmbeddingProvider& provider,
                          RetrievalQuery query, const FusionConfig& cfg);

} // namespace clinicsum
