#include "clinicsum/index.hpp"

#include <unordered_set>

#include <json.hpp>

#include "clinicsum/errors.hpp"
#include "clinicsum/io.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

Bm25Stats compute_bm25_stats(const std::vector<Chunk>& chunks, double k1, double b) {
    Bm25Stats stats;
    stats.k1 = k1;
    stats.b = b;
    stats.n_docs = chunks.size();
    std::size_t total_len = 0;
    for (const auto& chunk : chunks) {
        const auto tokens = word_tokens(chunk.text);
        stats.doc_len.push_back(tokens.size());
        total_len += tokens.size();
        std::unordered_set<std::string> distinct(tokens.begin(), tokens.end());
        for (const auto& term : distinct) {
            ++stats.doc_freq[term];
        }
    }
    stats.avgdl = stats.n_docs == 0 ? 0.0 : static_cast<double>(total_len) / static_cast<double>(stats.n_docs);
    return stats;
}

ChunkIndex build_index(const Transcript& transcript, EmbeddingProvider& provider, double k1, double b) {
    ChunkIndex index;
    index.transcript_id = transcript.id;
    index.chunks = split_sentences(flatten_diarized(transcript), transcript.id);
    if (index.chunks.empty()) {
        throw EmptyTranscriptError("transcript yields no chunks: " + transcript.id);
    }
    std::vector<std::string> texts;
    texts.reserve(index.chunks.size());
    for (const auto& chunk : index.chunks) {
        texts.push_back(chunk.text);
    }
    index.vectors = embed_batch(provider, texts);
    index.bm25 = compute_bm25_stats(index.chunks, k1, b);
    index.provider_name = provider.name();
    index.dim = provider.dim();
    return index;
}

void save_index(const ChunkIndex& index, const std::string& path) {
    nlohmann::json j;
    j["version"] = kIndexFormatVersion;
    j["transcript_id"] = index.transcript_id;
    j["provider"] = index.provider_name;
    j["dim"] = index.dim;
    j["k1"] = index.bm25.k1;
    j["b"] = index.bm25.b;
    auto chunks = nlohmann::json::array();
    for (const auto& chunk : index.chunks) {
        chunks.push_back({{"ord", chunk.ord}, {"text", chunk.text}});
    }
    j["chunks"] = std::move(chunks);
    auto vectors = nlohmann::json::array();
    for (const auto& v : index.vectors) {
        vectors.push_back(v.values);
    }
    j["vectors"] = std::move(vectors);
    j["doc_len"] = index.bm25.doc_len;
    j["doc_freq"] = index.bm25.doc_freq;
    atomic_write_file(path, j.dump(2) + "\n");
}

ChunkIndex load_index(const std::string& path) {
    const std::string content = read_text_file(path);
    nlohmann::json j = nlohmann::json::parse(content, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError("index file is not valid JSON: " + path);
    }
    if (!j.contains("version") || !j["version"].is_number_integer()) {
        throw ParseError("index file missing \"version\": " + path);
    }
    if (j["version"].get<int>() != kIndexFormatVersion) {
        throw VersionError("unsupported index version " + std::to_string(j["version"].get<int>()) +
                           " (expected " + std::to_string(kIndexFormatVersion) + ")");
    }
    try {
        ChunkIndex index;
        index.transcript_id = j.at("transcript_id").get<std::string>();
        index.provider_name = j.at("provider").get<std::string>();
        index.dim = j.at("dim").get<std::size_t>();
        index.bm25.k1 = j.at("k1").get<double>();
        index.bm25.b = j.at("b").get<double>();
        for (const auto& jc : j.at("chunks")) {
            index.chunks.push_back(
                Chunk{index.transcript_id, jc.at("ord").get<std::size_t>(), jc.at("text").get<std::string>()});
        }
        for (const auto& jv : j.at("vectors")) {
            EmbeddingVector v;
            v.values = jv.get<std::vector<double>>();
            index.vectors.push_back(std::move(v));
        }
        index.bm25.doc_len = j.at("doc_len").get<std::vector<std::size_t>>();
        index.bm25.doc_freq =
            j.at("doc_freq").get<std::unordered_map<std::string, std::size_t>>();
        index.bm25.n_docs = index.chunks.size();
        std::size_t total_len = 0;
        for (std::size_t len : index.bm25.doc_len) {
            total_len += len;
        }
        index.bm25.avgdl =
            index.bm25.n_docs == 0 ? 0.0 : static_cast<double>(total_len) / static_cast<double>(index.bm25.n_docs);
        if (index.vectors.size() != index.chunks.size() || index.bm25.doc_len.size() != index.chunks.size()) {
            throw ParseError("index file arrays are inconsistent: " + path);
        }
        for (std::size_t i = 0; i < index.chunks.size(); ++i) {
            if (index.chunks[i].ord != i) {
                throw ParseError("index chunks out of order: " + path);
            }
            if (index.vectors[i].dim() != index.dim) {
                throw ParseError("index vector dim mismatch: " + path);
            }
        }
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("index file malformed: " + path + ": " + e.what());
    }
}

} // namespace clinicsum
