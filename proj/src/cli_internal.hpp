#pragma once

#include "stylebench/analysis.hpp"
#include "stylebench/authorcount.hpp"
#include "stylebench/cli.hpp"
#include "stylebench/evaluation.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stylebench::cli {

// Thrown for malformed invocations (bad flag values, unusable combinations);
// mapped to exit code 3 rather than 1.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ValidateArgs {
    DatasetCoords coords;
};

struct ExploreArgs {
    DatasetCoords coords;
    std::filesystem::path out;
};

struct PredictArgs {
    DatasetCoords coords;
    std::string backend;
    std::filesystem::path run_dir;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 0;
    int parallelism = 4;
    std::optional<std::filesystem::path> cache_dir;
    std::optional<std::filesystem::path> replay_dir;
    bool strict_parse = false;
    bool store_raw = true;
    llm::PromptConfig prompt;
    ToolConfig config;
};

struct EvaluateArgs {
    std::vector<std::filesystem::path> run_dirs;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> root_override;
    evaluation::HammingDenominator denom = evaluation::HammingDenominator::boundaries;
};

struct AnalyzeArgs {
    std::filesystem::path run_dir;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> root_override;
    std::string provider = "fallback";
    ToolConfig config;
};

struct AuthorCountArgs {
    DatasetCoords coords;
    std::filesystem::path out;
    std::string provider = "fallback";
    authorcount::CvConfig cv;
    authorcount::LabelSource label_source = authorcount::LabelSource::authors;
    ToolConfig config;
};

int cmd_validate(const ValidateArgs& args);
int cmd_explore(const ExploreArgs& args);
int cmd_predict(const PredictArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_analyze(const AnalyzeArgs& args);
int cmd_authorcount(const AuthorCountArgs& args);

// --- shared helpers (cli_common.cpp) ---

std::string iso8601_utc_now();

corpus::Dataset load_coords(const DatasetCoords& coords);

// "fallback" | "precomputed:<file>" | "remote" (config-driven model).
std::unique_ptr<semantics::EmbeddingProvider> make_embedding_provider(const std::string& spec,
                                                                      const ToolConfig& config);

nlohmann::json read_manifest(const std::filesystem::path& run_dir);

DatasetCoords coords_from_manifest(const nlohmann::json& manifest,
                                   const std::optional<std::filesystem::path>& root_override);

}  // namespace stylebench::cli
