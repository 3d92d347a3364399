#include "stylebench/net.hpp"

#include "stylebench/util/rate_limiter.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

namespace stylebench::net {

std::string to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::auth: return "auth";
        case ErrorKind::rate_limit: return "rate_limit";
        case ErrorKind::timeout: return "timeout";
        case ErrorKind::transport: return "transport";
        case ErrorKind::malformed_response: return "malformed_response";
    }
    return "unknown";
}

namespace {

// Splits "https://host:port/v1" into a base url httplib understands and the
// path prefix to prepend to request paths.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ProviderError(ErrorKind::transport,
                            "endpoint must start with http:// or https://: " + endpoint);
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, ""};
    }
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }
    return {endpoint.substr(0, path_start), prefix};
}

bool is_retriable_status(int status) {
    return status == 408 || status == 429 || (status >= 500 && status < 600);
}

}  // namespace

struct JsonHttpClient::Impl {
    HttpConfig config;
    std::string base_url;
    std::string path_prefix;
    std::string api_key;
    util::RateLimiter limiter;
    std::mt19937_64 jitter_rng;
    std::mutex jitter_mu;

    explicit Impl(HttpConfig cfg)
        : config(std::move(cfg)),
          limiter(config.requests_per_minute),
          jitter_rng(static_cast<uint64_t>(
              std::chrono::steady_clock::now().time_since_epoch().count())) {
        auto [base, prefix] = split_endpoint(config.endpoint);
        base_url = base;
        path_prefix = prefix;
        const char* key = std::getenv(config.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            throw ProviderError(ErrorKind::auth,
                                "credential environment variable is unset or empty: " +
                                    config.api_key_env);
        }
        api_key = key;
    }

    httplib::Client make_client() {
        httplib::Client cli(base_url);
        auto secs = std::chrono::duration<double>(config.timeout_seconds);
        cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(secs));
        cli.set_read_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(secs));
        cli.set_write_timeout(std::chrono::duration_cast<std::chrono::milliseconds>(secs));
        cli.set_bearer_token_auth(api_key);
        cli.set_follow_location(true);
        return cli;
    }

    void backoff_sleep(int attempt) {
        double base = static_cast<double>(config.backoff_base_ms);
        double delay = base * static_cast<double>(1u << std::min(attempt, 10));
        double jitter;
        {
            std::lock_guard<std::mutex> lock(jitter_mu);
            jitter = std::uniform_real_distribution<double>(0.0, base)(jitter_rng);
        }
        auto ms = static_cast<int64_t>(delay + jitter);
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }
};

JsonHttpClient::JsonHttpClient(HttpConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

JsonHttpClient::~JsonHttpClient() = default;

const HttpConfig& JsonHttpClient::config() const { return impl_->config; }

nlohmann::json JsonHttpClient::post_json(const std::string& path, const nlohmann::json& body,
                                         RequestStats* stats) {
    const std::string full_path = impl_->path_prefix + path;
    const std::string payload = body.dump();
    const int max_attempts = std::max(1, impl_->config.max_retries + 1);

    int retries = 0;
    ErrorKind last_kind = ErrorKind::transport;
    std::string last_message = "request was never attempted";
    auto start = std::chrono::steady_clock::now();

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (attempt > 0) {
            impl_->backoff_sleep(attempt - 1);
            ++retries;
        }
        impl_->limiter.acquire();

        auto cli = impl_->make_client();
        auto res = cli.Post(full_path, payload, "application/json");

        if (!res) {
            auto err = res.error();
            bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             err == httplib::Error::Read || err == httplib::Error::Write;
            last_kind = timed_out ? ErrorKind::timeout : ErrorKind::transport;
            last_message = "transport failure: " + httplib::to_string(err);
            continue;  // transport problems are retriable
        }

        if (res->status == 401 || res->status == 403) {
            throw ProviderError(ErrorKind::auth, "provider rejected credentials (HTTP " +
                                                     std::to_string(res->status) + ")");
        }
        if (is_retriable_status(res->status)) {
            last_kind = res->status == 429 ? ErrorKind::rate_limit : ErrorKind::transport;
            last_message = "provider returned HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw ProviderError(ErrorKind::transport,
                                "provider returned HTTP " + std::to_string(res->status) + ": " +
                                    res->body.substr(0, 512));
        }

        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) {
            throw ProviderError(ErrorKind::malformed_response,
                                "provider returned a 2xx body that is not valid JSON");
        }
        if (stats != nullptr) {
            stats->retry_count = retries;
            stats->latency_ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - start)
                                    .count();
        }
        return parsed;
    }

    throw ProviderError(last_kind, last_message + " (after " + std::to_string(retries) +
                                       " retries)");
}

}  // namespace stylebench::net
