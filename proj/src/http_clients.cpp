#include <algorithm>
#include <cstdlib>
#include <memory>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "clinicsum/embed.hpp"
#include "clinicsum/errors.hpp"
#include "clinicsum/infer.hpp"

namespace clinicsum {

namespace {

struct ParsedUrl {
    std::string origin;      // scheme://host[:port]
    std::string path_prefix; // "" or "/something" with no trailing slash
};

ParsedUrl parse_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("base_url must include a scheme: " + base_url);
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl parsed;
    if (path_start == std::string::npos) {
        parsed.origin = base_url;
    } else {
        parsed.origin = base_url.substr(0, path_start);
        parsed.path_prefix = base_url.substr(path_start);
        while (!parsed.path_prefix.empty() && parsed.path_prefix.back() == '/') {
            parsed.path_prefix.pop_back();
        }
    }
    return parsed;
}

std::unique_ptr<httplib::Client> make_client(const ParsedUrl& url, std::chrono::seconds timeout,
                                             const std::string& api_key_env) {
    auto client = std::make_unique<httplib::Client>(url.origin);
    if (!client->is_valid()) {
        throw ConfigError("invalid base_url origin: " + url.origin);
    }
    client->set_connection_timeout(timeout);
    client->set_read_timeout(timeout);
    client->set_write_timeout(timeout);
    if (const char* key = std::getenv(api_key_env.c_str()); key != nullptr && *key != '\0') {
        client->set_default_headers({{"Authorization", std::string("Bearer ") + key}});
    }
    return client;
}

bool transient(const httplib::Result& result) {
    if (!result) {
        return true; // connection-level failure
    }
    return result->status >= 500 || result->status == 429;
}

// POSTs with bounded retries and exponential backoff. Returns the final
// result; the caller decides how to surface failure.
httplib::Result post_with_retries(httplib::Client& client, const std::string& path,
                                  const std::string& body, const RetryPolicy& policy) {
    auto backoff = policy.initial_backoff;
    httplib::Result result;
    for (int attempt = 1; attempt <= std::max(policy.attempts, 1); ++attempt) {
        result = client.Post(path, body, "application/json");
        if (!transient(result)) {
            return result;
        }
        if (attempt < policy.attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long>(static_cast<double>(backoff.count()) * policy.backoff_multiplier));
        }
    }
    return result;
}

std::string describe_failure(const httplib::Result& result) {
    if (!result) {
        return "transport error: " + httplib::to_string(result.error());
    }
    std::string detail = "HTTP status " + std::to_string(result->status);
    if (!result->body.empty()) {
        detail += ": " + result->body.substr(0, 256);
    }
    return detail;
}

} // namespace

HttpEmbeddingClient::HttpEmbeddingClient(HttpEmbeddingConfig config)
    : config_(std::move(config)), name_("http:" + config_.model) {
    if (config_.dim < 2) {
        throw ConfigError("embedding dim must be >= 2");
    }
    parse_base_url(config_.base_url); // validate eagerly
}

const std::string& HttpEmbeddingClient::name() const {
    return name_;
}

std::size_t HttpEmbeddingClient::dim() const {
    return config_.dim;
}

std::vector<EmbeddingVector> HttpEmbeddingClient::embed_raw(std::span<const std::string> texts) {
    const ParsedUrl url = parse_base_url(config_.base_url);
    auto client = make_client(url, config_.timeout, config_.api_key_env);

    nlohmann::json request;
    request["model"] = config_.model;
    request["input"] = std::vector<std::string>(texts.begin(), texts.end());

    auto result = post_with_retries(*client, url.path_prefix + "/v1/embeddings", request.dump(),
                                    config_.retry);
    if (!result || result->status != 200) {
        throw ProviderError("embedding request failed: " + describe_failure(result));
    }

    nlohmann::json response = nlohmann::json::parse(result->body, nullptr, false);
    if (response.is_discarded() || !response.contains("data") || !response["data"].is_array()) {
        throw ProviderError("embedding response is not {\"data\": [...]}");
    }
    std::vector<EmbeddingVector> vectors(texts.size());
    std::vector<bool> filled(texts.size(), false);
    for (const auto& item : response["data"]) {
        if (!item.contains("index") || !item.contains("embedding")) {
            throw ProviderError("embedding item missing \"index\" or \"embedding\"");
        }
        const auto index = item["index"].get<std::size_t>();
        if (index >= texts.size() || filled[index]) {
            throw ProviderError("embedding response index out of range or duplicated");
        }
        vectors[index].values = item["embedding"].get<std::vector<double>>();
        filled[index] = true;
    }
    if (!std::all_of(filled.begin(), filled.end(), [](bool f) { return f; })) {
        throw ProviderError("embedding response missing entries");
    }
    return vectors;
}

HttpChatClient::HttpChatClient(HttpGeneratorConfig config)
    : config_(std::move(config)), name_("http:" + config_.model) {
    parse_base_url(config_.base_url);
}

const std::string& HttpChatClient::name() const {
    return name_;
}

std::string HttpChatClient::complete(const std::string& prompt) {
    const ParsedUrl url = parse_base_url(config_.base_url);
    auto client = make_client(url, config_.timeout, config_.api_key_env);

    nlohmann::json request;
    request["model"] = config_.model;
    request["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    request["temperature"] = config_.temperature;
    request["max_tokens"] = config_.max_tokens;

    auto result = post_with_retries(*client, url.path_prefix + "/v1/chat/completions",
                                    request.dump(), config_.retry);
    if (!result || result->status != 200) {
        throw GenerationError("chat request failed: " + describe_failure(result));
    }

    nlohmann::json response = nlohmann::json::parse(result->body, nullptr, false);
    if (response.is_discarded() || !response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty()) {
        throw GenerationError("chat response has no choices");
    }
    const auto& first = response["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string()) {
        throw GenerationError("chat response missing message content");
    }
    return first["message"]["content"].get<std::string>();
}

} // namespace clinicsum
