#include "clinicsum/config.hpp"

#include <cctype>
#include <map>
#include <variant>

#include "clinicsum/errors.hpp"
#include "clinicsum/io.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

namespace {

// Minimal TOML reader covering what the config format uses: [section]
// headers, bare keys, basic "..." strings, integers, floats, booleans, and
// '#' comments. Arrays, tables and multi-line strings are out of scope.
using TomlValue = std::variant<std::string, std::int64_t, double, bool>;
using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

std::string parse_basic_string(const std::string& line, std::size_t& pos, std::size_t line_no) {
    std::string out;
    ++pos; // opening quote
    while (pos < line.size() && line[pos] != '"') {
        char c = line[pos];
        if (c == '\\') {
            ++pos;
            if (pos >= line.size()) {
                break;
            }
            switch (line[pos]) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default:
                throw ConfigError("unsupported escape in config string (line " +
                                  std::to_string(line_no) + ")");
            }
        } else {
            out.push_back(c);
        }
        ++pos;
    }
    if (pos >= line.size()) {
        throw ConfigError("unterminated string in config (line " + std::to_string(line_no) + ")");
    }
    ++pos; // closing quote
    return out;
}

TomlValue parse_value(const std::string& raw, std::size_t line_no) {
    if (raw == "true") {
        return true;
    }
    if (raw == "false") {
        return false;
    }
    const bool looks_float = raw.find_first_of(".eE") != std::string::npos;
    try {
        std::size_t consumed = 0;
        if (looks_float) {
            const double d = std::stod(raw, &consumed);
            if (consumed == raw.size()) {
                return d;
            }
        } else {
            const std::int64_t i = std::stoll(raw, &consumed);
            if (consumed == raw.size()) {
                return i;
            }
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("cannot parse config value '" + raw + "' (line " + std::to_string(line_no) +
                      ")");
}

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        // Strip comments outside strings.
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
                in_string = !in_string;
            } else if (line[i] == '#' && !in_string) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header (line " + std::to_string(line_no) + ")");
            }
            section = trim(line.substr(1, line.size() - 2));
            table[section];
            continue;
        }

        std::size_t i = 0;
        std::string key;
        while (i < line.size() && is_bare_key_char(line[i])) {
            key.push_back(line[i]);
            ++i;
        }
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (key.empty() || i >= line.size() || line[i] != '=') {
            throw ConfigError("expected 'key = value' (line " + std::to_string(line_no) + ")");
        }
        ++i;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i >= line.size()) {
            throw ConfigError("missing value (line " + std::to_string(line_no) + ")");
        }
        if (line[i] == '"') {
            std::size_t spos = i;
            const std::string value = parse_basic_string(line, spos, line_no);
            if (!trim(line.substr(spos)).empty()) {
                throw ConfigError("trailing characters after string (line " +
                                  std::to_string(line_no) + ")");
            }
            table[section][key] = value;
        } else {
            table[section][key] = parse_value(trim(line.substr(i)), line_no);
        }
    }
    return table;
}

template <typename T>
void assign_number(T& target, const TomlValue& value, const std::string& where) {
    if (std::holds_alternative<std::int64_t>(value)) {
        target = static_cast<T>(std::get<std::int64_t>(value));
    } else if (std::holds_alternative<double>(value)) {
        target = static_cast<T>(std::get<double>(value));
    } else {
        throw ConfigError(where + " must be a number");
    }
}

void assign_string(std::string& target, const TomlValue& value, const std::string& where) {
    if (!std::holds_alternative<std::string>(value)) {
        throw ConfigError(where + " must be a string");
    }
    target = std::get<std::string>(value);
}

} // namespace

void AppConfig::validate() const {
    if (embed_kind != "test" && embed_kind != "http") {
        throw ConfigError("embedding.kind must be \"test\" or \"http\"");
    }
    if (embed_kind == "http" && embed_base_url.empty()) {
        throw ConfigError("embedding.base_url required for the http provider");
    }
    if (gen_kind != "stub" && gen_kind != "http") {
        throw ConfigError("generator.kind must be \"stub\" or \"http\"");
    }
    if (gen_kind == "http" && gen_base_url.empty()) {
        throw ConfigError("generator.base_url required for the http generator");
    }
    if (dim < 2) {
        throw ConfigError("embedding.dim must be >= 2");
    }
    if (temperature < 0.0) {
        throw ConfigError("generator.temperature must be >= 0");
    }
    if (max_tokens < 1) {
        throw ConfigError("generator.max_tokens must be >= 1");
    }
    if (!(k1 >= 0.0)) {
        throw ConfigError("bm25.k1 must be >= 0");
    }
    if (b < 0.0 || b > 1.0) {
        throw ConfigError("bm25.b must lie in [0, 1]");
    }
    if (query.empty()) {
        throw ConfigError("prompt.query must be non-empty");
    }
    if (instruction.empty()) {
        throw ConfigError("prompt.instruction must be non-empty");
    }
    if (tokenizer_kind != "whitespace" && tokenizer_kind != "word") {
        throw ConfigError("tokenizer must be \"whitespace\" or \"word\"");
    }
    fusion.validate();
}

namespace {

// Default canned output for the stub generator: a minimal well-formed note.
constexpr const char* kStubSoapNote =
    "Subjective:\n- (stub summary)\n"
    "Objective:\n- (stub summary)\n"
    "Assessment:\n- (stub summary)\n"
    "Plan:\n- (stub summary)\n";

} // namespace

std::unique_ptr<EmbeddingProvider> AppConfig::make_embedding_provider() const {
    if (embed_kind == "test") {
        return std::make_unique<TestEmbedder>(dim);
    }
    HttpEmbeddingConfig http;
    http.base_url = embed_base_url;
    http.model = embed_model;
    http.dim = dim;
    return std::make_unique<HttpEmbeddingClient>(std::move(http));
}

std::unique_ptr<GeneratorClient> AppConfig::make_generator() const {
    if (gen_kind == "stub") {
        std::string response = kStubSoapNote;
        if (!stub_response_file.empty()) {
            response = read_text_file(stub_response_file);
        }
        return std::make_unique<StubGenerator>(std::move(response));
    }
    HttpGeneratorConfig http;
    http.base_url = gen_base_url;
    http.model = gen_model;
    http.temperature = temperature;
    http.max_tokens = max_tokens;
    return std::make_unique<HttpChatClient>(std::move(http));
}

std::unique_ptr<Tokenizer> AppConfig::make_tokenizer() const {
    return clinicsum::make_tokenizer(tokenizer_kind);
}

PipelineOptions AppConfig::pipeline_options() const {
    PipelineOptions options;
    options.query.text = query;
    options.fusion = fusion;
    options.bm25_k1 = k1;
    options.bm25_b = b;
    options.instruction = instruction;
    return options;
}

AppConfig parse_config(const std::string& toml_text) {
    const TomlTable table = parse_toml(toml_text);
    AppConfig config;
    for (const auto& [section, entries] : table) {
        for (const auto& [key, value] : entries) {
            const std::string where = section.empty() ? key : section + "." + key;
            if (section.empty() && key == "tokenizer") {
                assign_string(config.tokenizer_kind, value, where);
            } else if (section == "embedding" && key == "kind") {
                assign_string(config.embed_kind, value, where);
            } else if (section == "embedding" && key == "base_url") {
                assign_string(config.embed_base_url, value, where);
            } else if (section == "embedding" && key == "model") {
                assign_string(config.embed_model, value, where);
            } else if (section == "embedding" && key == "dim") {
                assign_number(config.dim, value, where);
            } else if (section == "generator" && key == "kind") {
                assign_string(config.gen_kind, value, where);
            } else if (section == "generator" && key == "base_url") {
                assign_string(config.gen_base_url, value, where);
            } else if (section == "generator" && key == "model") {
                assign_string(config.gen_model, value, where);
            } else if (section == "generator" && key == "temperature") {
                assign_number(config.temperature, value, where);
            } else if (section == "generator" && key == "max_tokens") {
                assign_number(config.max_tokens, value, where);
            } else if (section == "generator" && key == "stub_response_file") {
                assign_string(config.stub_response_file, value, where);
            } else if (section == "fusion" && key == "w_sparse") {
                assign_number(config.fusion.w_sparse, value, where);
            } else if (section == "fusion" && key == "w_dense") {
                assign_number(config.fusion.w_dense, value, where);
            } else if (section == "fusion" && key == "rrf_lambda") {
                assign_number(config.fusion.rrf_lambda, value, where);
            } else if (section == "fusion" && key == "top_k_per_retriever") {
                assign_number(config.fusion.top_k_per_retriever, value, where);
            } else if (section == "fusion" && key == "top_k_final") {
                assign_number(config.fusion.top_k_final, value, where);
            } else if (section == "bm25" && key == "k1") {
                assign_number(config.k1, value, where);
            } else if (section == "bm25" && key == "b") {
                assign_number(config.b, value, where);
            } else if (section == "prompt" && key == "query") {
                assign_string(config.query, value, where);
            } else if (section == "prompt" && key == "instruction") {
                assign_string(config.instruction, value, where);
            } else {
                throw ConfigError("unknown config key: " + where);
            }
        }
    }
    config.validate();
    return config;
}

AppConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

} // namespace clinicsum
