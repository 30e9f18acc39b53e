#pragma once

#include <memory>
#include <string>

#include "clinicsum/embed.hpp"
#include "clinicsum/infer.hpp"
#include "clinicsum/retrieve.hpp"
#include "clinicsum/tokenizer.hpp"

namespace clinicsum {

// Every tunable of the pipeline, loadable from a TOML file with sections
// [embedding], [generator], [fusion], [bm25], [prompt] and a root-level
// "tokenizer" key. Any key can be overridden by the CLI flag of the same
// name.
struct AppConfig {
    // [embedding]
    std::string embed_kind = "test"; // "test" | "http"
    std::string embed_base_url;
    std::string embed_model;
    std::size_t dim = 256;

    // [generator]
    std::string gen_kind = "stub"; // "stub" | "http"
    std::string gen_base_url;
    std::string gen_model;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string stub_response_file; // optional canned response for the stub

    FusionConfig fusion;

    // [bm25]
    double k1 = 1.2;
    double b = 0.75;

    // [prompt]
    std::string query = kDefaultRetrievalQuery;
    std::string instruction = kDefaultInstruction;

    std::string tokenizer_kind = "whitespace";

    void validate() const; // throws ConfigError

    std::unique_ptr<EmbeddingProvider> make_embedding_provider() const;
    std::unique_ptr<GeneratorClient> make_generator() const;
    std::unique_ptr<Tokenizer> make_tokenizer() const;
    PipelineOptions pipeline_options() const;
};

AppConfig load_config(const std::string& path);

// Parses the TOML text into a config; exposed so configs can be built from
// strings in tests.
AppConfig parse_config(const std::string& toml_text);

} // namespace clinicsum
