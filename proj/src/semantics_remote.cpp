#include "stylebench/net.hpp"
#include "stylebench/semantics.hpp"
#include "stylebench/util/digest.hpp"
#include "stylebench/util/jsonl.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>

namespace stylebench::semantics {

namespace {

net::HttpConfig to_http_config(const EmbeddingConfig& config) {
    net::HttpConfig http;
    http.endpoint = config.endpoint;
    http.api_key_env = config.api_key_env;
    http.timeout_seconds = config.timeout_seconds;
    http.max_retries = config.max_retries;
    http.requests_per_minute = config.requests_per_minute;
    http.backoff_base_ms = config.backoff_base_ms;
    return http;
}

}  // namespace

struct RemoteEmbedder::Impl {
    EmbeddingConfig config;
    net::JsonHttpClient client;

    explicit Impl(EmbeddingConfig cfg)
        : config(std::move(cfg)), client(to_http_config(config)) {
        if (config.cache_dir) {
            std::error_code ec;
            std::filesystem::create_directories(*config.cache_dir, ec);
            auto probe = *config.cache_dir / ".write-probe";
            std::ofstream out(probe);
            if (ec || !out) {
                throw std::runtime_error("embedding cache directory is not writable: " +
                                         config.cache_dir->string());
            }
            out.close();
            std::filesystem::remove(probe, ec);
        }
    }

    std::filesystem::path cache_path(const std::string& digest) const {
        return *config.cache_dir / (util::sha256_hex(config.model + "\n" + digest) + ".json");
    }

    std::optional<std::vector<double>> cache_lookup(const std::string& digest) const {
        if (!config.cache_dir) {
            return std::nullopt;
        }
        auto path = cache_path(digest);
        if (!std::filesystem::exists(path)) {
            return std::nullopt;
        }
        nlohmann::json entry = nlohmann::json::parse(util::read_file(path));
        return entry.at("values").get<std::vector<double>>();
    }

    void cache_store(const std::string& digest, const std::vector<double>& values) const {
        if (!config.cache_dir) {
            return;
        }
        nlohmann::json entry = {
            {"schema_version", 1},
            {"provider_id", config.model},
            {"unit_digest", digest},
            {"values", values},
        };
        util::write_file_atomic(cache_path(digest), entry.dump() + "\n");
    }

    // One /embeddings call for a chunk of units; returns vectors in chunk order.
    std::vector<std::vector<double>> fetch(const std::vector<std::string>& chunk) {
        nlohmann::json body = {{"model", config.model}, {"input", chunk}};
        nlohmann::json response = client.post_json("/embeddings", body);
        if (!response.contains("data") || !response["data"].is_array() ||
            response["data"].size() != chunk.size()) {
            throw net::ProviderError(net::ErrorKind::malformed_response,
                                     "embedding response data does not match input size");
        }
        std::vector<std::vector<double>> vectors(chunk.size());
        for (const auto& item : response["data"]) {
            if (!item.contains("index") || !item.contains("embedding") ||
                !item["embedding"].is_array()) {
                throw net::ProviderError(net::ErrorKind::malformed_response,
                                         "embedding response item missing index/embedding");
            }
            auto index = item["index"].get<std::size_t>();
            if (index >= vectors.size()) {
                throw net::ProviderError(net::ErrorKind::malformed_response,
                                         "embedding response index out of range");
            }
            vectors[index] = item["embedding"].get<std::vector<double>>();
        }
        for (const auto& v : vectors) {
            if (v.empty()) {
                throw net::ProviderError(net::ErrorKind::malformed_response,
                                         "embedding response left an input without a vector");
            }
        }
        return vectors;
    }
};

RemoteEmbedder::RemoteEmbedder(EmbeddingConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteEmbedder::~RemoteEmbedder() = default;

std::string RemoteEmbedder::id() const { return impl_->config.model; }

std::vector<EmbeddingVector> RemoteEmbedder::embed(const std::vector<std::string>& units) {
    std::vector<EmbeddingVector> out(units.size());
    // digest -> indices of identical units; each distinct unit is fetched at
    // most once per process and at most once ever when the cache is enabled.
    std::map<std::string, std::vector<std::size_t>> pending;
    for (std::size_t i = 0; i < units.size(); ++i) {
        std::string digest = util::sha256_hex(units[i]);
        out[i].provider_id = id();
        out[i].unit_digest = digest;
        if (auto cached = impl_->cache_lookup(digest)) {
            out[i].values = std::move(*cached);
        } else {
            pending[digest].push_back(i);
        }
    }

    std::vector<std::string> missing_units;
    std::vector<std::string> missing_digests;
    for (const auto& [digest, indices] : pending) {
        missing_units.push_back(units[indices.front()]);
        missing_digests.push_back(digest);
    }

    const auto batch = static_cast<std::size_t>(std::max(1, impl_->config.batch_size));
    for (std::size_t start = 0; start < missing_units.size(); start += batch) {
        std::size_t stop = std::min(start + batch, missing_units.size());
        std::vector<std::string> chunk(missing_units.begin() + static_cast<std::ptrdiff_t>(start),
                                       missing_units.begin() + static_cast<std::ptrdiff_t>(stop));
        auto vectors = impl_->fetch(chunk);
        for (std::size_t k = 0; k < vectors.size(); ++k) {
            const std::string& digest = missing_digests[start + k];
            impl_->cache_store(digest, vectors[k]);
            for (std::size_t index : pending[digest]) {
                out[index].values = vectors[k];
            }
        }
    }
    return out;
}

}  // namespace stylebench::semantics
