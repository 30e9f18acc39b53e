#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "clinicsum/corpus.hpp"
#include "clinicsum/embed.hpp"

namespace clinicsum {

struct Bm25Stats {
    std::unordered_map<std::string, std::size_t> doc_freq; // term -> chunks containing it
    std::vector<std::size_t> doc_len;                      // word tokens per chunk
    double avgdl = 0.0;
    double k1 = 1.2;
    double b = 0.75;
    std::size_t n_docs = 0;

    bool operator==(const Bm25Stats&) const = default;
};

// Per-transcript retrieval index: chunk texts, their normalized embedding
// vectors (parallel array), and BM25 corpus statistics. Immutable once built.
struct ChunkIndex {
    std::string transcript_id;
    std::vector<Chunk> chunks; // ordered by ord
    std::vector<EmbeddingVector> vectors;
    Bm25Stats bm25;
    std::string provider_name;
    std::size_t dim = 0;

    bool operator==(const ChunkIndex&) const = default;
};

// flatten -> split -> embed -> BM25 stats over lowercased alphanumeric word
// tokens. Throws EmptyTranscriptError when splitting yields no chunks.
ChunkIndex build_index(const Transcript& transcript, EmbeddingProvider& provider, double k1 = 1.2,
                       double b = 0.75);

// BM25 stats over already-split chunks; exposed for fixture-driven tests.
Bm25Stats compute_bm25_stats(const std::vector<Chunk>& chunks, double k1, double b);

// JSON file with an explicit "version" field. load(save(x)) == x
// field-for-field; double entries survive the round trip bit-exactly.
void save_index(const ChunkIndex& index, const std::string& path);
ChunkIndex load_index(const std::string& path);

inline constexpr int kIndexFormatVersion = 1;

} // namespace clinicsum
