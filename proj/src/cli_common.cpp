#include "cli_internal.hpp"

#include "stylebench/util/jsonl.hpp"

#include <ctime>
#include <fstream>

#ifdef _WIN32
#include <process.h>
#else
#include <unistd.h>
#endif

namespace stylebench::cli {

std::string DatasetCoords::label() const {
    return corpus::to_string(difficulty) + "/" + corpus::to_string(split);
}

ToolConfig load_config(const std::optional<std::filesystem::path>& path) {
    ToolConfig config;
    if (!path) {
        return config;
    }
    if (!std::filesystem::exists(*path)) {
        throw UsageError("config file does not exist: " + path->string());
    }
    nlohmann::json doc = nlohmann::json::parse(util::read_file(*path));

    if (doc.contains("model")) {
        const auto& m = doc["model"];
        auto& out = config.model;
        out.model = m.value("name", out.model);
        out.endpoint = m.value("endpoint", out.endpoint);
        out.api_key_env = m.value("api_key_env", out.api_key_env);
        out.temperature = m.value("temperature", out.temperature);
        out.max_tokens = m.value("max_tokens", out.max_tokens);
        out.timeout_seconds = m.value("timeout_seconds", out.timeout_seconds);
        out.max_retries = m.value("max_retries", out.max_retries);
        out.requests_per_minute = m.value("requests_per_minute", out.requests_per_minute);
        out.backoff_base_ms = m.value("backoff_base_ms", out.backoff_base_ms);
    }
    if (doc.contains("embedding")) {
        const auto& e = doc["embedding"];
        auto& out = config.embedding;
        out.model = e.value("model", out.model);
        out.endpoint = e.value("endpoint", out.endpoint);
        out.api_key_env = e.value("api_key_env", out.api_key_env);
        out.timeout_seconds = e.value("timeout_seconds", out.timeout_seconds);
        out.max_retries = e.value("max_retries", out.max_retries);
        out.requests_per_minute = e.value("requests_per_minute", out.requests_per_minute);
        out.backoff_base_ms = e.value("backoff_base_ms", out.backoff_base_ms);
        out.batch_size = e.value("batch_size", out.batch_size);
        if (e.contains("cache_dir")) {
            out.cache_dir = std::filesystem::path(e["cache_dir"].get<std::string>());
        }
    }
    if (doc.contains("defaults")) {
        config.parallelism = doc["defaults"].value("parallelism", config.parallelism);
    }
    return config;
}

DirLock::DirLock(const std::filesystem::path& dir) : path_(dir / ".lock") {
    std::filesystem::create_directories(dir);
    std::error_code ec;
    // mkdir is atomic: exactly one concurrent writer can create the lock.
    if (!std::filesystem::create_directory(path_, ec) || ec) {
        throw std::runtime_error("run directory is locked by another writer (" + path_.string() +
                                 " exists); remove it if the owner is gone");
    }
    std::ofstream pid(path_ / "pid");
    pid << getpid() << "\n";
    owned_ = true;
}

DirLock::~DirLock() {
    if (owned_) {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
}

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
#ifdef _WIN32
    gmtime_s(&utc, &now);
#else
    gmtime_r(&now, &utc);
#endif
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

corpus::Dataset load_coords(const DatasetCoords& coords) {
    return corpus::load_dataset(coords.root, coords.difficulty, coords.split,
                                coords.granularity);
}

std::unique_ptr<semantics::EmbeddingProvider> make_embedding_provider(const std::string& spec,
                                                                      const ToolConfig& config) {
    if (spec == "fallback") {
        return std::make_unique<semantics::FallbackEmbedder>();
    }
    if (spec.rfind("precomputed:", 0) == 0) {
        auto file = spec.substr(std::string("precomputed:").size());
        if (file.empty()) {
            throw UsageError("precomputed provider needs a file: precomputed:<path>");
        }
        return std::make_unique<semantics::PrecomputedEmbedder>(file);
    }
    if (spec == "remote") {
        return std::make_unique<semantics::RemoteEmbedder>(config.embedding);
    }
    throw UsageError("unknown embedding provider '" + spec +
                     "' (expected fallback, precomputed:<path>, or remote)");
}

void write_predictions(const std::filesystem::path& path,
                       const std::vector<predictors::Prediction>& predictions,
                       const std::vector<llm::BatchFailure>& failures,
                       const std::string& backend_id, bool store_raw) {
    std::vector<nlohmann::json> rows;
    rows.reserve(predictions.size() + failures.size());
    for (const auto& p : predictions) {
        nlohmann::json row = {
            {"schema_version", 1},
            {"problem_id", p.problem_id},
            {"backend_id", p.backend_id},
            {"changes", p.changes},
            {"repaired", p.repaired},
            {"repair_kind", p.repair_kind},
        };
        if (p.latency_ms) {
            row["latency_ms"] = *p.latency_ms;
        }
        if (p.prompt_tokens) {
            row["prompt_tokens"] = *p.prompt_tokens;
        }
        if (p.completion_tokens) {
            row["completion_tokens"] = *p.completion_tokens;
        }
        if (store_raw && p.raw_response) {
            row["raw_response"] = *p.raw_response;
        }
        rows.push_back(std::move(row));
    }
    for (const auto& f : failures) {
        rows.push_back({
            {"schema_version", 1},
            {"problem_id", f.problem_id},
            {"backend_id", backend_id},
            {"changes", nlohmann::json::array()},
            {"error_kind", f.kind},
            {"error_message", f.message},
        });
    }
    util::write_jsonl(path, rows);
}

std::vector<predictors::Prediction> read_predictions(const std::filesystem::path& path) {
    std::vector<predictors::Prediction> out;
    for (const auto& row : util::read_jsonl(path)) {
        predictors::Prediction p;
        p.problem_id = row.at("problem_id").get<std::string>();
        p.backend_id = row.value("backend_id", "");
        p.changes = row.at("changes").get<std::vector<int>>();
        p.repaired = row.value("repaired", false);
        p.repair_kind = row.value("repair_kind", "none");
        if (row.contains("latency_ms")) {
            p.latency_ms = row["latency_ms"].get<double>();
        }
        if (row.contains("prompt_tokens")) {
            p.prompt_tokens = row["prompt_tokens"].get<long>();
        }
        if (row.contains("completion_tokens")) {
            p.completion_tokens = row["completion_tokens"].get<long>();
        }
        if (row.contains("raw_response")) {
            p.raw_response = row["raw_response"].get<std::string>();
        }
        out.push_back(std::move(p));
    }
    return out;
}

nlohmann::json read_manifest(const std::filesystem::path& run_dir) {
    RunPaths paths{run_dir};
    if (!std::filesystem::exists(paths.manifest())) {
        throw std::runtime_error("no manifest.json in " + run_dir.string() +
                                 " (is this a completed run directory?)");
    }
    return nlohmann::json::parse(util::read_file(paths.manifest()));
}

DatasetCoords coords_from_manifest(const nlohmann::json& manifest,
                                   const std::optional<std::filesystem::path>& root_override) {
    DatasetCoords coords;
    coords.root = root_override ? *root_override
                                : std::filesystem::path(manifest.at("root").get<std::string>());
    coords.difficulty =
        corpus::difficulty_from_string(manifest.at("difficulty").get<std::string>());
    coords.split = corpus::split_from_string(manifest.at("split").get<std::string>());
    coords.granularity =
        corpus::granularity_from_string(manifest.at("granularity").get<std::string>());
    return coords;
}

}  // namespace stylebench::cli
