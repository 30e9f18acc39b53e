#include "clinicsum/retrieve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "clinicsum/errors.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

void FusionConfig::validate() const {
    if (w_sparse < 0.0 || w_sparse > 1.0 || w_dense < 0.0 || w_dense > 1.0) {
        throw ConfigError("retriever weights must lie in [0, 1]");
    }
    if (std::abs(w_sparse + w_dense - 1.0) > 1e-9) {
        throw ConfigError("w_sparse + w_dense must equal 1");
    }
    if (!(rrf_lambda > 0.0)) {
        throw ConfigError("rrf_lambda must be positive");
    }
    if (top_k_per_retriever < 1) {
        throw ConfigError("top_k_per_retriever must be >= 1");
    }
    if (top_k_final < 1) {
        throw ConfigError("top_k_final must be >= 1");
    }
}

std::vector<double> bm25_scores(const ChunkIndex& index, const std::string& query_text) {
    const auto& stats = index.bm25;
    std::vector<double> scores(index.chunks.size(), 0.0);
    const auto query_terms = word_tokens(query_text);
    if (query_terms.empty() || index.chunks.empty()) {
        return scores;
    }

    // Distinct query terms with their corpus df; absent terms contribute 0.
    std::unordered_map<std::string, double> idf;
    for (const auto& term : query_terms) {
        if (idf.count(term)) {
            continue;
        }
        auto it = stats.doc_freq.find(term);
        if (it == stats.doc_freq.end()) {
            continue;
        }
        const double n = static_cast<double>(stats.n_docs);
        const double df = static_cast<double>(it->second);
        idf[term] = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    }
    if (idf.empty()) {
        return scores;
    }

    for (std::size_t d = 0; d < index.chunks.size(); ++d) {
        std::unordered_map<std::string, std::size_t> tf;
        for (auto& token : word_tokens(index.chunks[d].text)) {
            ++tf[token];
        }
        const double doclen = static_cast<double>(stats.doc_len[d]);
        double score = 0.0;
        for (const auto& [term, term_idf] : idf) {
            auto it = tf.find(term);
            if (it == tf.end()) {
                continue;
            }
            const double f = static_cast<double>(it->second);
            score += term_idf * (f * (stats.k1 + 1.0)) /
                     (f + stats.k1 * (1.0 - stats.b + stats.b * doclen / stats.avgdl));
        }
        scores[d] = score;
    }
    return scores;
}

namespace {

std::vector<ScoredRank> rank_descending(std::vector<ScoredRank> entries, std::size_t k) {
    std::stable_sort(entries.begin(), entries.end(), [](const ScoredRank& a, const ScoredRank& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.chunk_ord < b.chunk_ord;
    });
    if (entries.size() > k) {
        entries.resize(k);
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = i + 1;
    }
    return entries;
}

void check_rank_consist(const std::vector<ScoredRank>& list, const char* which) {
    std::unordered_set<std::size_t> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].rank != i + 1) {
            throw PreconditionError(std::string(which) + " list ranks must be 1..len");
        }
        if (!seen.insert(list[i].chunk_ord).second) {
            throw PreconditionError(std::string(which) + " list repeats a chunk ord");
        }
    }
}

} // namespace

std::vector<ScoredRank> sparse_retrieve(const ChunkIndex& index, const std::string& query_text,
                                        std::size_t k) {
    if (k < 1) {
        throw ConfigError("sparse_retrieve: k must be >= 1");
    }
    const auto scores = bm25_scores(index, query_text);
    std::vector<ScoredRank> hits;
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (scores[d] > 0.0) {
            hits.push_back(ScoredRank{d, scores[d], 0});
        }
    }
    return rank_descending(std::move(hits), k);
}

std::vector<ScoredRank> dense_retrieve(const ChunkIndex& index, const RetrievalQuery& query,
                                       std::size_t k) {
    if (k < 1) {
        throw ConfigError("dense_retrieve: k must be >= 1");
    }
    if (!query.vector) {
        throw PreconditionError("dense_retrieve: query vector not computed");
    }
    if (query.vector->dim() != index.dim) {
        throw DimensionError("query dim " + std::to_string(query.vector->dim()) +
                             " does not match index dim " + std::to_string(index.dim));
    }
    // Index vectors are L2-normalized at embed time, so the dot product is
    // the cosine; a zero (non-embeddable) vector scores 0.
    std::vector<ScoredRank> hits;
    hits.reserve(index.vectors.size());
    for (std::size_t d = 0; d < index.vectors.size(); ++d) {
        hits.push_back(ScoredRank{d, dot(*query.vector, index.vectors[d]), 0});
    }
    return rank_descending(std::move(hits), k);
}

std::vector<RankedCandidate> rrf_fuse(const std::vector<ScoredRank>& sparse_ranked,
                                      const std::vector<ScoredRank>& dense_ranked,
                                      const FusionConfig& cfg) {
    cfg.validate();
    check_rank_consist(sparse_ranked, "sparse");
    check_rank_consist(dense_ranked, "dense");

    std::map<std::size_t, RankedCandidate> by_ord;
    for (const auto& hit : sparse_ranked) {
        auto& cand = by_ord[hit.chunk_ord];
        cand.chunk_ord = hit.chunk_ord;
        cand.sparse_rank = hit.rank;
        cand.sparse_score = hit.score;
    }
    for (const auto& hit : dense_ranked) {
        auto& cand = by_ord[hit.chunk_ord];
        cand.chunk_ord = hit.chunk_ord;
        cand.dense_rank = hit.rank;
        cand.dense_score = hit.score;
    }

    std::vector<RankedCandidate> fused;
    fused.reserve(by_ord.size());
    for (auto& [ord, cand] : by_ord) {
        double score = 0.0;
        if (cand.sparse_rank) {
            score += cfg.w_sparse / (cfg.rrf_lambda + static_cast<double>(*cand.sparse_rank));
        }
        if (cand.dense_rank) {
            score += cfg.w_dense / (cfg.rrf_lambda + static_cast<double>(*cand.dense_rank));
        }
        cand.fused_score = score;
        // A zero fused score can only arise under a zero weight; such a
        // candidate carries no rank evidence and is dropped.
        if (score > 0.0) {
            fused.push_back(std::move(cand));
        }
    }
    std::stable_sort(fused.begin(), fused.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.fused_score != b.fused_score) {
            return a.fused_score > b.fused_score;
        }
        return a.chunk_ord < b.chunk_ord;
    });
    return fused;
}

FusedContext reconstruct_context(const ChunkIndex& index, const std::vector<RankedCandidate>& fused,
                                 std::size_t top_k_final) {
    if (top_k_final < 1) {
        throw ConfigError("top_k_final must be >= 1");
    }
    FusedContext context;
    context.candidates = fused;

    std::vector<std::size_t> ords;
    for (std::size_t i = 0; i < fused.size() && i < top_k_final; ++i) {
        ords.push_back(fused[i].chunk_ord);
    }
    std::sort(ords.begin(), ords.end());

    std::vector<std::string> texts;
    for (std::size_t ord : ords) {
        if (ord >= index.chunks.size()) {
            throw PreconditionError("candidate ord " + std::to_string(ord) + " outside index");
        }
        context.selected.push_back(index.chunks[ord]);
        texts.push_back(index.chunks[ord].text);
    }
    context.concatenated_text = join_with_spaces(texts);
    return context;
}

FusedContext filter_index(const ChunkIndex& index, EmbeddingProvider& provider, RetrievalQuery query,
                          const FusionConfig& cfg) {
    cfg.validate();
    if (query.text.empty()) {
        throw PreconditionError("retrieval query text must be non-empty");
    }
    if (!query.vector) {
        query.vector = embed_one(provider, query.text);
    }
    const auto sparse = sparse_retrieve(index, query.text, cfg.top_k_per_retriever);
    const auto dense = dense_retrieve(index, query, cfg.top_k_per_retriever);
    const auto fused = rrf_fuse(sparse, dense, cfg);
    return reconstruct_context(index, fused, cfg.top_k_final);
}

FusedContext filter_transcript(const Transcript& transcript, EmbeddingProvider& provider,
                               RetrievalQuery query, const FusionConfig& cfg, double k1, double b) {
    const ChunkIndex index = build_index(transcript, provider, k1, b);
    return filter_index(index, provider, std::move(query), cfg);
}

} // namespace clinicsum
