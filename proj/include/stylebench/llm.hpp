#pragma once

#include "stylebench/corpus.hpp"
#include "stylebench/net.hpp"
#include "stylebench/predictors.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stylebench::llm {

// ---------------------------------------------------------------------------
// Prompt assembly
// ---------------------------------------------------------------------------

struct PromptConfig {
    corpus::Granularity granularity = corpus::Granularity::sentence;
    // The instruction nudges the model to expect roughly this many changes.
    int assumed_changes_hint = 3;
    // When set, this value replaces the hint above (e.g. from a count model).
    std::optional<int> injected_author_count;
    // Appends the stylistic-feature checklist to the instruction.
    bool include_feature_list = true;
};

// Renders the full prompt for one problem: fixed instruction block, the units
// as a JSON string list, then the length/expectation epilogue. The epilogue
// states the exact unit count and required output length for this problem.
std::string build_prompt(const std::vector<std::string>& units, const PromptConfig& config);

// Stable digest of every byte the template contributes plus the config knobs;
// any change to either yields a different digest. Used in cache keys and run
// manifests so cached responses never leak across prompt revisions.
std::string prompt_digest(const PromptConfig& config);

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

enum class ParseErrorKind { no_document, non_binary, length_mismatch };

class ParseError : public std::runtime_error {
  public:
    ParseError(ParseErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ParseErrorKind kind() const { return kind_; }

  private:
    ParseErrorKind kind_;
};

struct ParsedChanges {
    std::vector<int> changes;
    // True iff the vector length had to be padded or truncated to fit.
    bool repaired = false;
    // How the answer was recovered: none | padded | truncated |
    // extracted_from_fence (document found inside surrounding prose/fences).
    std::string repair_kind = "none";
};

// Recovers a binary change vector from a model response. Scans for the first
// balanced JSON object containing a "changes" key (handles markdown fences
// and surrounding prose), validates every element is 0/1, and reconciles the
// length against expected_len: lenient mode pads with zeros or truncates,
// strict mode raises. Throws ParseError when no usable document exists or
// values are not binary.
ParsedChanges parse_changes(const std::string& response, std::size_t expected_len, bool strict);

// ---------------------------------------------------------------------------
// Completion providers
// ---------------------------------------------------------------------------

struct ModelConfig {
    std::string model = "gpt-4o-mini";
    std::string endpoint = "https://api.openai.com/v1";
    std::string api_key_env = "STYLEBENCH_API_KEY";
    double temperature = 0.0;
    int max_tokens = 512;
    double timeout_seconds = 120.0;
    int max_retries = 3;
    int requests_per_minute = 60;  // 0 = unlimited
    int backoff_base_ms = 500;
};

struct CompletionResult {
    std::string text;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
    double latency_ms = 0.0;
    int retry_count = 0;
};

class CompletionProvider {
  public:
    virtual ~CompletionProvider() = default;
    // Stable identity used in backend ids and cache keys (e.g. model name).
    virtual std::string id() const = 0;
    virtual CompletionResult complete(const std::string& prompt,
                                      const std::string& problem_id) = 0;
};

// Chat-completions client for OpenAI-compatible endpoints. The credential is
// read from the environment variable named in the config and never stored in
// any artifact. Construction fails fast when the variable is unset.
class HttpChatProvider : public CompletionProvider {
  public:
    explicit HttpChatProvider(ModelConfig config);
    ~HttpChatProvider() override;

    std::string id() const override;
    CompletionResult complete(const std::string& prompt, const std::string& problem_id) override;

  private:
    ModelConfig config_;
    std::unique_ptr<net::JsonHttpClient> client_;
};

// Serves canned responses from <dir>/<problem_id>.txt. Used to replay
// recorded model output through the full pipeline without network access.
class ReplayProvider : public CompletionProvider {
  public:
    explicit ReplayProvider(std::filesystem::path dir, std::string id = "replay");

    std::string id() const override;
    CompletionResult complete(const std::string& prompt, const std::string& problem_id) override;

  private:
    std::filesystem::path dir_;
    std::string id_;
};

// One-shot convenience: send a single prompt through an HTTP provider.
CompletionResult complete(const std::string& prompt, const ModelConfig& config);

// ---------------------------------------------------------------------------
// Batch runner
// ---------------------------------------------------------------------------

struct BatchConfig {
    PromptConfig prompt;
    int parallelism = 4;
    bool strict_parse = false;
    // Responses are cached on disk keyed by (provider id, prompt digest,
    // problem id); reruns replay from cache without provider calls.
    std::optional<std::filesystem::path> cache_dir;
    // When set, run on a seeded uniform subsample of this many problems.
    std::optional<std::size_t> sample;
    std::uint64_t sample_seed = 0;
};

struct BatchFailure {
    std::string problem_id;
    std::string kind;  // auth | rate_limit | timeout | transport | malformed_response | parse | internal
    std::string message;
};

struct BatchResult {
    std::vector<predictors::Prediction> predictions;  // successful problems, dataset order
    std::vector<BatchFailure> failures;               // dataset order
    std::size_t provider_calls = 0;
    std::size_t cache_hits = 0;
};

// Runs the predictor over every (sampled) problem with a bounded worker pool.
// Per-problem failures are recorded, not fatal; auth failures abort the batch
// since no subsequent call can succeed.
BatchResult run_batch(const corpus::Dataset& dataset, CompletionProvider& provider,
                      const BatchConfig& config);

}  // namespace stylebench::llm
