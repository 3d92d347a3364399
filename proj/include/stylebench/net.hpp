#pragma once

#include <json.hpp>

#include <memory>
#include <stdexcept>
#include <string>

namespace stylebench::net {

enum class ErrorKind { auth, rate_limit, timeout, transport, malformed_response };

std::string to_string(ErrorKind k);

class ProviderError : public std::runtime_error {
  public:
    ProviderError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

struct HttpConfig {
    std::string endpoint;  // e.g. https://api.openai.com/v1
    std::string api_key_env = "STYLEBENCH_API_KEY";
    double timeout_seconds = 120.0;
    int max_retries = 3;
    int requests_per_minute = 60;  // 0 = unlimited
    int backoff_base_ms = 500;
};

struct RequestStats {
    int retry_count = 0;
    double latency_ms = 0.0;
};

// Minimal JSON-over-HTTP client for OpenAI-compatible providers: bearer auth
// from the named env var (checked up front, before any network traffic),
// exponential backoff with jitter on 408/429/5xx and transport failures, a
// shared requests-per-minute token bucket, and typed errors.
class JsonHttpClient {
  public:
    explicit JsonHttpClient(HttpConfig config);
    ~JsonHttpClient();

    JsonHttpClient(const JsonHttpClient&) = delete;
    JsonHttpClient& operator=(const JsonHttpClient&) = delete;

    // POSTs body to endpoint+path; returns the parsed JSON response.
    nlohmann::json post_json(const std::string& path, const nlohmann::json& body,
                             RequestStats* stats = nullptr);

    const HttpConfig& config() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace stylebench::net
