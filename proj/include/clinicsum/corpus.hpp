#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clinicsum/tokenizer.hpp"

namespace clinicsum {

struct Turn {
    std::string speaker; // "D", "P", or any label; accepted verbatim
    std::string text;
};

// A conversation: diarized turns, a flat raw text, or both. A usable
// transcript has at least one non-empty of the two.
struct Transcript {
    std::string id;
    std::vector<Turn> turns;
    std::optional<std::string> raw_text;
    std::optional<std::string> specialty;
};

// One sentence of a transcript. ord values are unique and contiguous from 0;
// text carries no leading/trailing whitespace.
struct Chunk {
    std::string transcript_id;
    std::size_t ord = 0;
    std::string text;

    bool operator==(const Chunk&) const = default;
};

struct DatasetPair {
    std::optional<std::string> id;
    std::string conversation;
    std::string summary;
};

// Speaker labels are dropped; turn texts are trimmed and joined with single
// spaces. raw_text, when set, wins. Throws EmptyTranscriptError when neither
// is usable.
std::string flatten_diarized(const Transcript& transcript);

// Split after each of {., ?, !} when followed by whitespace or end-of-text;
// the terminator stays attached to its sentence. A period inside a
// digit-period-digit pattern or after a single uppercase letter does not end
// a sentence. Segments are trimmed; empty ones dropped. Empty input gives an
// empty list.
std::vector<Chunk> split_sentences(std::string_view flat_text, const std::string& transcript_id = "");

enum class TranscriptFormat { jsonl, txt };

// JSONL: one transcript per line ({"id", "turns", "raw_text"?, "specialty"?}).
// txt: the whole file is one flat transcript, id = filename stem.
// Malformed lines raise ParseError carrying the 1-based line number.
std::vector<Transcript> read_transcripts(const std::string& path, TranscriptFormat format);

// {"id"?, "conversation", "summary"} per line; both strings must be non-empty.
std::vector<DatasetPair> read_pairs(const std::string& path);

struct StatsAggregate {
    std::size_t count = 0; // sum over items
    double mean = 0.0;
    std::size_t max = 0;
    std::size_t min = 0;
};

struct CorpusStats {
    std::size_t items = 0;
    StatsAggregate sentences;
    StatsAggregate words; // whitespace-separated
    StatsAggregate chars;
    StatsAggregate vocab; // distinct lowercased words per item
    StatsAggregate tokens;
};

CorpusStats corpus_stats(const std::vector<std::string>& texts, const Tokenizer& tokenizer);
CorpusStats corpus_stats(const std::vector<Transcript>& transcripts, const Tokenizer& tokenizer);
CorpusStats corpus_stats(const std::vector<DatasetPair>& pairs, const Tokenizer& tokenizer);

} // namespace clinicsum
