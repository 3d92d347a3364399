#include "stylebench/llm.hpp"

#include "stylebench/util/jsonl.hpp"

#include <json.hpp>

#include <filesystem>
#include <utility>

namespace stylebench::llm {

namespace {

net::HttpConfig to_http_config(const ModelConfig& config) {
    net::HttpConfig http;
    http.endpoint = config.endpoint;
    http.api_key_env = config.api_key_env;
    http.timeout_seconds = config.timeout_seconds;
    http.max_retries = config.max_retries;
    http.requests_per_minute = config.requests_per_minute;
    http.backoff_base_ms = config.backoff_base_ms;
    return http;
}

std::optional<long> usage_field(const nlohmann::json& usage, const char* key) {
    if (usage.is_object() && usage.contains(key) && usage[key].is_number_integer()) {
        return usage[key].get<long>();
    }
    return std::nullopt;
}

}  // namespace

HttpChatProvider::HttpChatProvider(ModelConfig config)
    : config_(std::move(config)),
      client_(std::make_unique<net::JsonHttpClient>(to_http_config(config_))) {}

HttpChatProvider::~HttpChatProvider() = default;

std::string HttpChatProvider::id() const { return config_.model; }

CompletionResult HttpChatProvider::complete(const std::string& prompt,
                                            const std::string& /*problem_id*/) {
    nlohmann::json body = {
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"max_tokens", config_.max_tokens},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"},
                                                           {"content", prompt}}})},
    };

    net::RequestStats stats;
    nlohmann::json response = client_->post_json("/chat/completions", body, &stats);

    if (!response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty()) {
        throw net::ProviderError(net::ErrorKind::malformed_response,
                                 "completion response has no choices");
    }
    const auto& message = response["choices"][0]["message"];
    if (!message.is_object() || !message.contains("content") ||
        !message["content"].is_string()) {
        throw net::ProviderError(net::ErrorKind::malformed_response,
                                 "completion response has no message content");
    }

    CompletionResult result;
    result.text = message["content"].get<std::string>();
    result.latency_ms = stats.latency_ms;
    result.retry_count = stats.retry_count;
    if (response.contains("usage")) {
        result.prompt_tokens = usage_field(response["usage"], "prompt_tokens");
        result.completion_tokens = usage_field(response["usage"], "completion_tokens");
    }
    return result;
}

ReplayProvider::ReplayProvider(std::filesystem::path dir, std::string id)
    : dir_(std::move(dir)), id_(std::move(id)) {}

std::string ReplayProvider::id() const { return id_; }

CompletionResult ReplayProvider::complete(const std::string& /*prompt*/,
                                          const std::string& problem_id) {
    auto path = dir_ / (problem_id + ".txt");
    if (!std::filesystem::exists(path)) {
        throw net::ProviderError(net::ErrorKind::transport,
                                 "no recorded response for problem " + problem_id + " under " +
                                     dir_.string());
    }
    CompletionResult result;
    result.text = util::read_file(path);
    return result;
}

CompletionResult complete(const std::string& prompt, const ModelConfig& config) {
    HttpChatProvider provider(config);
    return provider.complete(prompt, "adhoc");
}

}  // namespace stylebench::llm
