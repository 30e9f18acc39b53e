#include "clinicsum/infer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "clinicsum/corpus.hpp"
#include "clinicsum/text.hpp"

namespace clinicsum {

namespace {

std::string guard_context(const std::string& context) {
    std::string out;
    out.reserve(context.size());
    std::size_t pos = 0;
    while (pos <= context.size()) {
        const std::size_t eol = context.find('\n', pos);
        const std::size_t end = eol == std::string::npos ? context.size() : eol;
        std::string_view line(context.data() + pos, end - pos);
        if (line.find("### Response:") != std::string_view::npos) {
            out += "> ";
        }
        out.append(line);
        if (eol == std::string::npos) {
            break;
        }
        out.push_back('\n');
        pos = eol + 1;
    }
    return out;
}

} // namespace

std::string PromptTemplate::render() const {
    if (instruction.empty()) {
        throw PreconditionError("render_prompt: empty instruction");
    }
    if (input_context.empty()) {
        throw PreconditionError("render_prompt: empty context");
    }
    std::string prompt;
    prompt += header;
    prompt += "\n\n### Instruction:\n";
    prompt += instruction;
    prompt += "\n\n### Input:\n";
    prompt += guard_context(input_context);
    prompt += "\n\n### Response:\n";
    prompt += response_seed;
    return prompt;
}

std::string render_prompt(const std::string& instruction, const std::string& context) {
    PromptTemplate tpl;
    tpl.instruction = instruction;
    tpl.input_context = context;
    return tpl.render();
}

PartialSoapError::PartialSoapError(SoapSummary partial, std::vector<std::string> missing)
    : Error("SOAP output missing sections: " + join_with_spaces(missing)),
      partial_(std::move(partial)),
      missing_(std::move(missing)) {}

namespace {

constexpr std::array<const char*, 4> kSectionNames = {"subjective", "objective", "assessment",
                                                      "plan"};

// Returns the section index if the line is a header, -1 otherwise. The
// remainder after the colon (minus trailing decoration) lands in `rest`.
int match_header(std::string_view line, std::string& rest) {
    std::size_t i = 0;
    while (i < line.size() &&
           (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == '*' || line[i] == '#' ||
            line[i] == '-')) {
        ++i;
    }
    for (int section = 0; section < 4; ++section) {
        const std::string_view name = kSectionNames[static_cast<std::size_t>(section)];
        if (line.size() - i < name.size()) {
            continue;
        }
        bool matches = true;
        for (std::size_t j = 0; j < name.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(line[i + j])) != name[j]) {
                matches = false;
                break;
            }
        }
        if (!matches) {
            continue;
        }
        std::size_t after = i + name.size();
        while (after < line.size() && (line[after] == ' ' || line[after] == '\t')) {
            ++after;
        }
        if (after >= line.size() || line[after] != ':') {
            continue;
        }
        ++after;
        // Strip bold markers around the colon, e.g. "**Subjective:** text".
        while (after < line.size() && line[after] == '*') {
            ++after;
        }
        rest = trim(line.substr(after));
        return section;
    }
    return -1;
}

} // namespace

SoapSummary parse_soap(const std::string& raw) {
    std::array<std::vector<std::string>, 4> sections;
    std::array<bool, 4> found = {false, false, false, false};
    int current = -1;

    std::istringstream in(raw);
    std::string line;
    while (std::getline(in, line)) {
        std::string rest;
        const int section = match_header(line, rest);
        if (section >= 0) {
            current = section;
            found[static_cast<std::size_t>(section)] = true;
            if (!rest.empty()) {
                sections[static_cast<std::size_t>(section)].push_back(rest);
            }
        } else if (current >= 0) {
            sections[static_cast<std::size_t>(current)].push_back(line);
        }
    }

    auto section_text = [&](int i) {
        std::string text;
        for (const auto& l : sections[static_cast<std::size_t>(i)]) {
            if (!text.empty()) {
                text.push_back('\n');
            }
            text += l;
        }
        return trim(text);
    };

    SoapSummary summary;
    summary.subjective = section_text(0);
    summary.objective = section_text(1);
    summary.assessment = section_text(2);
    summary.plan = section_text(3);
    summary.raw_text = raw;

    std::vector<std::string> missing;
    for (int i = 0; i < 4; ++i) {
        if (!found[static_cast<std::size_t>(i)]) {
            missing.emplace_back(kSectionNames[static_cast<std::size_t>(i)]);
        }
    }
    if (!missing.empty()) {
        throw PartialSoapError(std::move(summary), std::move(missing));
    }
    return summary;
}

std::string generate_summary(GeneratorClient& client, const std::string& prompt) {
    if (prompt.empty()) {
        throw PreconditionError("generate_summary: empty prompt");
    }
    std::string content = client.complete(prompt);
    if (trim(content).empty()) {
        throw EmptyResponseError("generator " + client.name() + " returned empty content");
    }
    return content;
}

StubGenerator::StubGenerator(std::string response) : response_(std::move(response)) {}

const std::string& StubGenerator::name() const {
    return name_;
}

std::string StubGenerator::complete(const std::string& prompt) {
    last_prompt_ = prompt;
    return response_;
}

PipelineResult summarize_pipeline(const Transcript& transcript, EmbeddingProvider& provider,
                                  GeneratorClient& generator, const PipelineOptions& options,
                                  const Tokenizer& tokenizer) {
    PipelineResult result;
    const std::string flat = flatten_diarized(transcript);
    result.transcript_tokens = tokenizer.count(flat);

    result.context = filter_transcript(transcript, provider, options.query, options.fusion,
                                       options.bm25_k1, options.bm25_b);
    result.context_tokens = tokenizer.count(result.context.concatenated_text);
    result.prompt = render_prompt(options.instruction, result.context.concatenated_text);

    const auto started = std::chrono::steady_clock::now();
    result.raw = generate_summary(generator, result.prompt);
    result.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    try {
        result.summary = parse_soap(result.raw);
    } catch (const PartialSoapError& e) {
        result.summary = e.partial();
        result.missing_sections = e.missing();
    }
    return result;
}

} // namespace clinicsum
