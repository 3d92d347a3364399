#include "cli_internal.hpp"

#include "stylebench/util/digest.hpp"
#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/rng.hpp"

#include <charconv>
#include <iostream>

namespace stylebench::cli {

namespace {

std::vector<std::size_t> sampled_indices(std::size_t total, std::optional<std::size_t> sample,
                                         std::uint64_t seed) {
    std::vector<std::size_t> indices(total);
    for (std::size_t i = 0; i < total; ++i) {
        indices[i] = i;
    }
    if (sample && *sample < total) {
        util::Rng rng(seed);
        indices = rng.sample_indices(total, *sample);
    }
    return indices;
}

// Runs one of the deterministic/random baselines over the (sampled) dataset.
llm::BatchResult run_baseline(const corpus::Dataset& dataset, const std::string& backend,
                              const PredictArgs& args) {
    std::string kind = backend.substr(std::string("baseline:").size());
    std::optional<std::size_t> rand_k;
    if (kind.rfind("rand", 0) == 0) {
        std::size_t k = 0;
        const char* first = kind.data() + 4;
        const char* last = kind.data() + kind.size();
        auto [ptr, ec] = std::from_chars(first, last, k);
        if (ec != std::errc() || ptr != last) {
            throw UsageError("malformed random baseline '" + backend +
                             "' (expected baseline:rand<k>)");
        }
        rand_k = k;
    } else if (kind != "all" && kind != "none") {
        throw UsageError("unknown baseline '" + backend +
                         "' (expected baseline:all, baseline:none, or baseline:rand<k>)");
    }

    llm::BatchResult result;
    for (std::size_t i : sampled_indices(dataset.size(), args.sample, args.seed)) {
        const corpus::Problem& problem = dataset.problems[i].first;
        predictors::Prediction p;
        if (rand_k) {
            // Per-problem stream derived from the run seed and the id, so the
            // draw for a problem does not depend on which problems ran.
            p = predictors::random_k(problem.boundary_count(), *rand_k,
                                     util::derive_seed(args.seed, problem.id));
        } else if (kind == "all") {
            p = predictors::all_changes(problem.boundary_count());
        } else {
            p = predictors::no_changes(problem.boundary_count());
        }
        p.problem_id = problem.id;
        result.predictions.push_back(std::move(p));
    }
    return result;
}

llm::BatchConfig batch_config(const PredictArgs& args) {
    llm::BatchConfig config;
    config.prompt = args.prompt;
    config.parallelism = args.parallelism;
    config.strict_parse = args.strict_parse;
    config.cache_dir = args.cache_dir;
    config.sample = args.sample;
    config.sample_seed = args.seed;
    return config;
}

}  // namespace

int cmd_predict(const PredictArgs& args) {
    if (args.sample && *args.sample == 0) {
        throw UsageError("--sample must be at least 1");
    }
    corpus::Dataset dataset = load_coords(args.coords);

    DirLock lock(args.run_dir);
    RunPaths paths{args.run_dir};

    llm::BatchResult result;
    std::string backend_id = args.backend;
    std::optional<std::string> digest;

    if (args.backend.rfind("baseline:", 0) == 0) {
        result = run_baseline(dataset, args.backend, args);
        for (auto& p : result.predictions) {
            backend_id = p.backend_id;  // includes the resolved k
        }
    } else if (args.backend.rfind("llm:", 0) == 0) {
        llm::ModelConfig model = args.config.model;
        model.model = args.backend.substr(std::string("llm:").size());
        if (model.model.empty()) {
            throw UsageError("llm backend needs a model name: llm:<model>");
        }
        llm::HttpChatProvider provider(model);
        digest = llm::prompt_digest(args.prompt);
        result = llm::run_batch(dataset, provider, batch_config(args));
        backend_id = "llm:" + provider.id();
    } else if (args.backend == "replay") {
        if (!args.replay_dir) {
            throw UsageError("backend 'replay' requires --replay-dir");
        }
        llm::ReplayProvider provider(*args.replay_dir);
        digest = llm::prompt_digest(args.prompt);
        result = llm::run_batch(dataset, provider, batch_config(args));
        backend_id = "llm:" + provider.id();
    } else {
        throw UsageError("unknown backend '" + args.backend +
                         "' (expected baseline:*, llm:<model>, or replay)");
    }

    long repaired = 0;
    for (const auto& p : result.predictions) {
        if (p.repaired) {
            ++repaired;
        }
    }

    write_predictions(paths.predictions(), result.predictions, result.failures, backend_id,
                      args.store_raw);

    nlohmann::json manifest = {
        {"schema_version", 1},
        {"root", args.coords.root.string()},
        {"difficulty", corpus::to_string(args.coords.difficulty)},
        {"split", corpus::to_string(args.coords.split)},
        {"granularity", corpus::to_string(args.coords.granularity)},
        {"backend_id", backend_id},
        {"seed", args.seed},
        {"counts",
         {{"ok", result.predictions.size()},
          {"failed", result.failures.size()},
          {"repaired", repaired}}},
        {"provider_calls", result.provider_calls},
        {"cache_hits", result.cache_hits},
    };
    if (digest) {
        manifest["prompt_digest"] = *digest;
        manifest["prompt"] = {
            {"granularity", corpus::to_string(args.prompt.granularity)},
            {"assumed_changes_hint", args.prompt.assumed_changes_hint},
            {"include_feature_list", args.prompt.include_feature_list},
        };
        if (args.prompt.injected_author_count) {
            manifest["prompt"]["injected_author_count"] = *args.prompt.injected_author_count;
        }
    }
    if (args.backend.rfind("llm:", 0) == 0) {
        // Snapshot of the model knobs; the credential itself lives only in
        // the environment variable named here and is never persisted.
        const auto& m = args.config.model;
        manifest["model"] = {
            {"name", args.backend.substr(4)},   {"endpoint", m.endpoint},
            {"api_key_env", m.api_key_env},     {"temperature", m.temperature},
            {"max_tokens", m.max_tokens},       {"timeout_seconds", m.timeout_seconds},
            {"max_retries", m.max_retries},     {"requests_per_minute", m.requests_per_minute},
        };
    }
    if (args.sample) {
        manifest["sample"] = {{"size", *args.sample}, {"seed", args.seed}};
    }

    // Idempotence over completed runs: when a manifest from a previous run
    // describes this exact outcome, keep it (including its run_id/timestamp).
    bool keep_existing = false;
    if (std::filesystem::exists(paths.manifest())) {
        nlohmann::json previous = nlohmann::json::parse(util::read_file(paths.manifest()));
        nlohmann::json comparable = previous;
        comparable.erase("run_id");
        comparable.erase("created_at");
        nlohmann::json candidate = manifest;
        // cache statistics legitimately differ between a cold and warm run
        comparable.erase("provider_calls");
        comparable.erase("cache_hits");
        candidate.erase("provider_calls");
        candidate.erase("cache_hits");
        keep_existing = comparable == candidate;
    }
    if (!keep_existing) {
        const std::string created_at = iso8601_utc_now();
        manifest["created_at"] = created_at;
        manifest["run_id"] =
            util::sha256_hex(created_at + "|" + backend_id + "|" + args.run_dir.string())
                .substr(0, 16);
        util::write_file_atomic(paths.manifest(), manifest.dump(2) + "\n");
    }

    std::cout << backend_id << " on " << args.coords.label() << ": "
              << result.predictions.size() << " ok, " << result.failures.size() << " failed, "
              << repaired << " repaired (" << result.provider_calls << " provider calls, "
              << result.cache_hits << " cache hits)\n";
    std::cout << "run dir: " << args.run_dir.string() << "\n";

    if (result.predictions.empty() && !result.failures.empty()) {
        std::cerr << "error: every problem failed; first failure: "
                  << result.failures.front().kind << ": " << result.failures.front().message
                  << "\n";
        return kExitProviderFailure;
    }
    return kExitOk;
}

}  // namespace stylebench::cli
