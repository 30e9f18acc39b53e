#include "clinicsum/tokenizer.hpp"

#include "clinicsum/errors.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

const std::string& WhitespaceTokenizer::name() const {
    static const std::string kName = "whitespace";
    return kName;
}

std::size_t WhitespaceTokenizer::count(std::string_view text) const {
    return whitespace_tokens(text).size();
}

const std::string& WordTokenizer::name() const {
    static const std::string kName = "word";
    return kName;
}

std::size_t WordTokenizer::count(std::string_view text) const {
    return word_tokens(text).size();
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& kind) {
    if (kind == "whitespace") {
        return std::make_unique<WhitespaceTokenizer>();
    }
    if (kind == "word") {
        return std::make_unique<WordTokenizer>();
    }
    throw ConfigError("unknown tokenizer kind: " + kind);
}

} // namespace clinicsum
