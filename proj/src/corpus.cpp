#include "clinicsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "clinicsum/errors.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

namespace {

inline bool is_terminator(char c) {
    return c == '.' || c == '?' || c == '!';
}

inline bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline bool is_digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

inline bool is_upper(char c) {
    return std::isupper(static_cast<unsigned char>(c)) != 0;
}

inline bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// A lone period after a single uppercase letter ("J. Smith") is an initial,
// not a sentence end. Decimals ("2.5") never reach the boundary test because
// the period is not followed by whitespace.
bool suppressed_period(std::string_view text, std::size_t pos) {
    if (text[pos] != '.') {
        return false;
    }
    if (pos + 1 < text.size() && pos >= 1 && is_digit(text[pos - 1]) && is_digit(text[pos + 1])) {
        return true;
    }
    if (pos >= 1 && is_upper(text[pos - 1])) {
        return pos == 1 || !is_alnum(text[pos - 2]);
    }
    return false;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

std::string flatten_diarized(const Transcript& transcript) {
    if (transcript.raw_text && !trim(*transcript.raw_text).empty()) {
        return *transcript.raw_text;
    }
    std::vector<std::string> parts;
    parts.reserve(transcript.turns.size());
    for (const auto& turn : transcript.turns) {
        std::string text = trim(turn.text);
        if (!text.empty()) {
            parts.push_back(std::move(text));
        }
    }
    if (parts.empty()) {
        throw EmptyTranscriptError("transcript has no turns and no raw text: " + transcript.id);
    }
    return join_with_spaces(parts);
}

std::vector<Chunk> split_sentences(std::string_view flat_text, const std::string& transcript_id) {
    std::vector<Chunk> chunks;
    std::size_t start = 0;
    const std::size_t n = flat_text.size();

    auto emit = [&](std::size_t end_exclusive) {
        std::string text = trim(flat_text.substr(start, end_exclusive - start));
        if (!text.empty()) {
            chunks.push_back(Chunk{transcript_id, chunks.size(), std::move(text)});
        }
        start = end_exclusive;
    };

    std::size_t i = 0;
    while (i < n) {
        if (is_terminator(flat_text[i])) {
            std::size_t run_end = i;
            while (run_end + 1 < n && is_terminator(flat_text[run_end + 1])) {
                ++run_end;
            }
            const bool at_boundary = run_end + 1 == n || is_space(flat_text[run_end + 1]);
            const bool lone_period = run_end == i;
            if (at_boundary && !(lone_period && suppressed_period(flat_text, i))) {
                emit(run_end + 1);
            }
            i = run_end + 1;
        } else {
            ++i;
        }
    }
    emit(n);
    return chunks;
}

std::vector<Transcript> read_transcripts(const std::string& path, TranscriptFormat format) {
    if (format == TranscriptFormat::txt) {
        Transcript t;
        t.id = std::filesystem::path(path).stem().string();
        t.raw_text = read_file(path);
        return {std::move(t)};
    }

    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<Transcript> transcripts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw ParseError("invalid JSON object", line_no);
        }
        if (!j.contains("id") || !j["id"].is_string()) {
            throw ParseError("transcript missing string \"id\"", line_no);
        }
        Transcript t;
        t.id = j["id"].get<std::string>();
        if (j.contains("turns")) {
            if (!j["turns"].is_array()) {
                throw ParseError("\"turns\" must be an array", line_no);
            }
            for (const auto& jt : j["turns"]) {
                if (!jt.is_object() || !jt.contains("speaker") || !jt.contains("text") ||
                    !jt["speaker"].is_string() || !jt["text"].is_string()) {
                    throw ParseError("turn must be {\"speaker\": str, \"text\": str}", line_no);
                }
                t.turns.push_back(Turn{jt["speaker"].get<std::string>(), jt["text"].get<std::string>()});
            }
        }
        if (j.contains("raw_text")) {
            if (!j["raw_text"].is_string()) {
                throw ParseError("\"raw_text\" must be a string", line_no);
            }
            t.raw_text = j["raw_text"].get<std::string>();
        }
        if (j.contains("specialty")) {
            if (!j["specialty"].is_string()) {
                throw ParseError("\"specialty\" must be a string", line_no);
            }
            t.specialty = j["specialty"].get<std::string>();
        }
        transcripts.push_back(std::move(t));
    }
    return transcripts;
}

std::vector<DatasetPair> read_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<DatasetPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw ParseError("invalid JSON object", line_no);
        }
        DatasetPair p;
        if (j.contains("id")) {
            if (!j["id"].is_string()) {
                throw ParseError("\"id\" must be a string", line_no);
            }
            p.id = j["id"].get<std::string>();
        }
        if (!j.contains("conversation") || !j["conversation"].is_string() ||
            j["conversation"].get<std::string>().empty()) {
            throw ParseError("pair missing non-empty \"conversation\"", line_no);
        }
        if (!j.contains("summary") || !j["summary"].is_string() ||
            j["summary"].get<std::string>().empty()) {
            throw ParseError("pair missing non-empty \"summary\"", line_no);
        }
        p.conversation = j["conversation"].get<std::string>();
        p.summary = j["summary"].get<std::string>();
        pairs.push_back(std::move(p));
    }
    return pairs;
}

namespace {

StatsAggregate aggregate(const std::vector<std::size_t>& values) {
    StatsAggregate agg;
    if (values.empty()) {
        return agg;
    }
    agg.max = values.front();
    agg.min = values.front();
    for (std::size_t v : values) {
        agg.count += v;
        agg.max = std::max(agg.max, v);
        agg.min = std::min(agg.min, v);
    }
    agg.mean = static_cast<double>(agg.count) / static_cast<double>(values.size());
    return agg;
}

} // namespace

CorpusStats corpus_stats(const std::vector<std::string>& texts, const Tokenizer& tokenizer) {
    std::vector<std::size_t> sentences, words, chars, vocab, tokens;
    for (const auto& text : texts) {
        sentences.push_back(split_sentences(text).size());
        auto ws = whitespace_tokens(text);
        words.push_back(ws.size());
        chars.push_back(text.size());
        std::unordered_set<std::string> distinct;
        for (const auto& w : ws) {
            distinct.insert(to_lower(w));
        }
        vocab.push_back(distinct.size());
        tokens.push_back(tokenizer.count(text));
    }
    CorpusStats stats;
    stats.items = texts.size();
    stats.sentences = aggregate(sentences);
    stats.words = aggregate(words);
    stats.chars = aggregate(chars);
    stats.vocab = aggregate(vocab);
    stats.tokens = aggregate(tokens);
    return stats;
}

CorpusStats corpus_stats(const std::vector<Transcript>& transcripts, const Tokenizer& tokenizer) {
    std::vector<std::string> texts;
    texts.reserve(transcripts.size());
    for (const auto& t : transcripts) {
        texts.push_back(flatten_diarized(t));
    }
    return corpus_stats(texts, tokenizer);
}

CorpusStats corpus_stats(const std::vector<DatasetPair>& pairs, const Tokenizer& tokenizer) {
    std::vector<std::string> texts;
    texts.reserve(pairs.size());
    for (const auto& p : pairs) {
        texts.push_back(p.conversation);
    }
    return corpus_stats(texts, tokenizer);
}

} // namespace clinicsum
