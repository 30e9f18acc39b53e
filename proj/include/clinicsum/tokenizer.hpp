#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace clinicsum {

// Token counting contract. count("") == 0; counting is additive across
// concatenation with a separator up to a boundary token.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual const std::string& name() const = 0;
    virtual std::size_t count(std::string_view text) const = 0;
};

// Default tokenizer: whitespace-separated tokens. Exactly additive across
// concatenation with a whitespace separator.
class WhitespaceTokenizer final : public Tokenizer {
public:
    const std::string& name() const override;
    std::size_t count(std::string_view text) const override;
};

// Word tokenizer over lowercased alphanumeric runs; same token stream BM25
// and ROUGE use.
class WordTokenizer final : public Tokenizer {
public:
    const std::string& name() const override;
    std::size_t count(std::string_view text) const override;
};

// kind is "whitespace" or "word"; throws ConfigError otherwise.
std::unique_ptr<Tokenizer> make_tokenizer(const std::string& kind);

} // namespace clinicsum
