#include "stylebench/llm.hpp"

#include "stylebench/util/digest.hpp"
#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/parallel.hpp"
#include "stylebench/util/rng.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>

namespace stylebench::llm {

namespace {

// Disk cache of raw provider responses. One JSON file per (provider, prompt
// revision, problem) triple; files are written atomically so concurrent
// workers and interrupted runs cannot leave half-written entries behind.
class ResponseCache {
  public:
    explicit ResponseCache(const std::filesystem::path& dir) : dir_(dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        auto probe = dir_ / ".write-probe";
        std::ofstream out(probe);
        if (ec || !out) {
            throw std::runtime_error("response cache directory is not writable: " +
                                     dir_.string());
        }
        out.close();
        std::filesystem::remove(probe, ec);
    }

    static std::string key(const std::string& provider_id, const std::string& digest,
                           const std::string& problem_id) {
        return util::sha256_hex(provider_id + "\n" + digest + "\n" + problem_id);
    }

    std::optional<CompletionResult> lookup(const std::string& key) const {
        auto path = dir_ / (key + ".json");
        if (!std::filesystem::exists(path)) {
            return std::nullopt;
        }
        nlohmann::json entry = nlohmann::json::parse(util::read_file(path));
        CompletionResult result;
        result.text = entry.at("response").get<std::string>();
        if (entry.contains("prompt_tokens") && entry["prompt_tokens"].is_number_integer()) {
            result.prompt_tokens = entry["prompt_tokens"].get<long>();
        }
        if (entry.contains("completion_tokens") &&
            entry["completion_tokens"].is_number_integer()) {
            result.completion_tokens = entry["completion_tokens"].get<long>();
        }
        result.latency_ms = entry.value("latency_ms", 0.0);
        return result;
    }

    void store(const std::string& key, const std::string& provider_id,
               const std::string& digest, const std::string& problem_id,
               const CompletionResult& result) const {
        nlohmann::json entry = {
            {"schema_version", 1},
            {"provider_id", provider_id},
            {"prompt_digest", digest},
            {"problem_id", problem_id},
            {"response", result.text},
            {"latency_ms", result.latency_ms},
        };
        if (result.prompt_tokens) {
            entry["prompt_tokens"] = *result.prompt_tokens;
        }
        if (result.completion_tokens) {
            entry["completion_tokens"] = *result.completion_tokens;
        }
        util::write_file_atomic(dir_ / (key + ".json"), entry.dump(2) + "\n");
    }

  private:
    std::filesystem::path dir_;
};

struct Slot {
    std::optional<predictors::Prediction> prediction;
    std::optional<BatchFailure> failure;
};

}  // namespace

BatchResult run_batch(const corpus::Dataset& dataset, CompletionProvider& provider,
                      const BatchConfig& config) {
    std::vector<std::size_t> chosen(dataset.problems.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        chosen[i] = i;
    }
    if (config.sample && *config.sample < chosen.size()) {
        util::Rng rng(config.sample_seed);
        chosen = rng.sample_indices(chosen.size(), *config.sample);
    }

    std::optional<ResponseCache> cache;
    if (config.cache_dir) {
        cache.emplace(*config.cache_dir);
    }

    const std::string digest = prompt_digest(config.prompt);
    const std::string backend_id = "llm:" + provider.id();

    std::vector<Slot> slots(chosen.size());
    std::atomic<std::size_t> provider_calls{0};
    std::atomic<std::size_t> cache_hits{0};
    std::atomic<bool> credentials_rejected{false};
    std::string auth_message;
    std::mutex auth_mu;

    const auto workers = static_cast<std::size_t>(std::max(1, config.parallelism));
    util::parallel_for(chosen.size(), workers, [&](std::size_t i) {
        const corpus::Problem& problem = dataset.problems[chosen[i]].first;
        Slot& slot = slots[i];
        if (credentials_rejected.load()) {
            slot.failure = {problem.id, "auth", "skipped after credential rejection"};
            return;
        }
        try {
            const std::string prompt = build_prompt(problem.units, config.prompt);
            const std::string key = ResponseCache::key(provider.id(), digest, problem.id);

            CompletionResult completion;
            bool hit = false;
            if (cache) {
                if (auto cached = cache->lookup(key)) {
                    completion = std::move(*cached);
                    hit = true;
                }
            }
            if (!hit) {
                completion = provider.complete(prompt, problem.id);
                provider_calls.fetch_add(1);
                if (cache) {
                    cache->store(key, provider.id(), digest, problem.id, completion);
                }
            } else {
                cache_hits.fetch_add(1);
            }

            ParsedChanges parsed =
                parse_changes(completion.text, problem.boundary_count(), config.strict_parse);

            predictors::Prediction prediction;
            prediction.problem_id = problem.id;
            prediction.backend_id = backend_id;
            prediction.changes = std::move(parsed.changes);
            prediction.repaired = parsed.repaired;
            prediction.repair_kind = parsed.repair_kind;
            prediction.raw_response = completion.text;
            prediction.latency_ms = completion.latency_ms;
            prediction.prompt_tokens = completion.prompt_tokens;
            prediction.completion_tokens = completion.completion_tokens;
            slot.prediction = std::move(prediction);
        } catch (const net::ProviderError& e) {
            if (e.kind() == net::ErrorKind::auth) {
                {
                    std::lock_guard<std::mutex> lock(auth_mu);
                    if (auth_message.empty()) {
                        auth_message = e.what();
                    }
                }
                credentials_rejected.store(true);
            }
            slot.failure = {problem.id, net::to_string(e.kind()), e.what()};
        } catch (const ParseError& e) {
            slot.failure = {problem.id, "parse", e.what()};
        } catch (const std::exception& e) {
            slot.failure = {problem.id, "internal", e.what()};
        }
    });

    if (credentials_rejected.load()) {
        throw net::ProviderError(net::ErrorKind::auth, auth_message);
    }

    BatchResult result;
    result.provider_calls = provider_calls.load();
    result.cache_hits = cache_hits.load();
    for (auto& slot : slots) {
        if (slot.prediction) {
            result.predictions.push_back(std::move(*slot.prediction));
        } else if (slot.failure) {
            result.failures.push_back(std::move(*slot.failure));
        }
    }
    return result;
}

}  // namespace stylebench::llm
