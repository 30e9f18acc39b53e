#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "clinicsum/embed.hpp"
#include "clinicsum/errors.hpp"
#include "clinicsum/retrieve.hpp"
#include "clinicsum/tokenizer.hpp"

namespace clinicsum {

inline constexpr const char* kPromptHeader =
    "Below is an instruction that describes a task, paired with an input that provides further "
    "context. Write a response that appropriately completes the request.";

inline constexpr const char* kDefaultInstruction =
    "Generate a clinical summary in SOAP format (Subjective, Objective, Assessment, Plan) from "
    "the following patient-doctor conversation context.";

// Instruction-following template. Rendered output carries, in order, the
// header, "### Instruction:", "### Input:", and "### Response:" markers.
// Context lines containing "### Response:" are prefixed with "> " so the
// input cannot forge the template's own markers.
struct PromptTemplate {
    std::string header = kPromptHeader;
    std::string instruction;
    std::string input_context;
    std::string response_seed; // text placed after the response marker

    // {header}\n\n### Instruction:\n{instruction}\n\n### Input:\n{context}
    // \n\n### Response:\n{response_seed}. Empty instruction or context is a
    // PreconditionError.
    std::string render() const;
};

std::string render_prompt(const std::string& instruction, const std::string& context);

struct SoapSummary {
    std::string subjective;
    std::string objective;
    std::string assessment;
    std::string plan;
    std::string raw_text;
};

// parse_soap failure: some headers were not found. Carries the partial
// result so callers can persist what was recovered.
class PartialSoapError : public Error {
public:
    PartialSoapError(SoapSummary partial, std::vector<std::string> missing);
    const SoapSummary& partial() const { return partial_; }
    const std::vector<std::string>& missing() const { return missing_; }

private:
    SoapSummary partial_;
    std::vector<std::string> missing_;
};

// Case-insensitive scan for "Subjective:", "Objective:", "Assessment:" and
// "Plan:" at line starts, tolerating leading "**", "##", or "-" decoration.
// Text between headers belongs to the preceding section. Throws
// PartialSoapError when any header is missing.
SoapSummary parse_soap(const std::string& raw);

// Chat-completion backend contract. Implementations must be shareable
// across concurrent requests and enforce a per-request timeout.
class GeneratorClient {
public:
    virtual ~GeneratorClient() = default;
    virtual const std::string& name() const = 0;
    // Returns the first choice's message content verbatim. Transport
    // failures surface as GenerationError.
    virtual std::string complete(const std::string& prompt) = 0;
};

// Validated generation: non-empty prompt in, non-empty content out
// (EmptyResponseError otherwise).
std::string generate_summary(GeneratorClient& client, const std::string& prompt);

struct HttpGeneratorConfig {
    std::string base_url;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::chrono::seconds timeout{60};
    RetryPolicy retry;
    std::string api_key_env = "CLINICSUM_LLM_API_KEY";
};

// POST {base_url}/v1/chat/completions with a single user message, reading
// choices[0].message.content. Retries transient failures per policy.
class HttpChatClient final : public GeneratorClient {
public:
    explicit HttpChatClient(HttpGeneratorConfig config);

    const std::string& name() const override;
    std::string complete(const std::string& prompt) override;

private:
    HttpGeneratorConfig config_;
    std::string name_;
};

// Offline generator returning a fixed response; records the last prompt so
// tests can assert on what was sent.
class StubGenerator final : public GeneratorClient {
public:
    explicit StubGenerator(std::string response);

    const std::string& name() const override;
    std::string complete(const std::string& prompt) override;
    const std::string& last_prompt() const { return last_prompt_; }

private:
    std::string response_;
    std::string last_prompt_;
    std::string name_ = "stub";
};

struct PipelineOptions {
    RetrievalQuery query;
    FusionConfig fusion;
    double bm25_k1 = 1.2;
    double bm25_b = 0.75;
    std::string instruction = kDefaultInstruction;
};

struct PipelineResult {
    SoapSummary summary;
    FusedContext context;
    std::string prompt;
    std::string raw;
    std::size_t context_tokens = 0;
    std::size_t transcript_tokens = 0;
    std::chrono::milliseconds latency{0};
    // Section headers parse_soap could not find; empty when complete.
    std::vector<std::string> missing_sections;
};

// filter_transcript -> render_prompt -> generate_summary -> parse_soap.
// A partial SOAP parse is surfaced through missing_sections rather than
// thrown, so the raw text can still be persisted.
PipelineResult summarize_pipeline(const Transcript& transcript, EmbeddingProvider& provider,
                                  GeneratorClient& generator, const PipelineOptions& options,
                                  const Tokenizer& tokenizer);

} // namespace clinicsum
