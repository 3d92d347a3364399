#pragma once

#include "stylebench/corpus.hpp"
#include "stylebench/llm.hpp"
#include "stylebench/predictors.hpp"
#include "stylebench/semantics.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stylebench::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataFailure = 1;
inline constexpr int kExitProviderFailure = 2;
inline constexpr int kExitUsage = 3;

// Provider endpoints, model ids, and defaults from the JSON config file;
// command-line flags override individual fields. Credential values never
// appear here — only the names of the environment variables that hold them.
struct ToolConfig {
    llm::ModelConfig model;
    semantics::EmbeddingConfig embedding;
    int parallelism = 4;
};

ToolConfig load_config(const std::optional<std::filesystem::path>& path);

// Mutual exclusion for a run directory: an atomically created `.lock`
// directory that names the owning pid. Construction throws when another
// writer holds the lock; destruction releases it.
class DirLock {
  public:
    explicit DirLock(const std::filesystem::path& dir);
    ~DirLock();

    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    std::filesystem::path path_;
    bool owned_ = false;
};

struct DatasetCoords {
    std::filesystem::path root;
    corpus::Difficulty difficulty = corpus::Difficulty::easy;
    corpus::Split split = corpus::Split::train;
    corpus::Granularity granularity = corpus::Granularity::sentence;

    std::string label() const;  // "<difficulty>/<split>"
};

// Run-directory persistence: prediction records and the manifest documenting
// what produced them. The manifest is written only after every prediction
// landed, so a manifest's presence marks a complete run.
struct RunPaths {
    std::filesystem::path dir;

    std::filesystem::path manifest() const { return dir / "manifest.json"; }
    std::filesystem::path predictions() const { return dir / "predictions.jsonl"; }
    std::filesystem::path eval_summary() const { return dir / "eval_summary.csv"; }
    std::filesystem::path eval_records() const { return dir / "eval_records.jsonl"; }
};

void write_predictions(const std::filesystem::path& path,
                       const std::vector<predictors::Prediction>& predictions,
                       const std::vector<llm::BatchFailure>& failures,
                       const std::string& backend_id, bool store_raw);

// Reads every prediction row back; failure rows come back with empty change
// vectors, which downstream evaluation counts as failed problems.
std::vector<predictors::Prediction> read_predictions(const std::filesystem::path& path);

// Entry point used by the binary: parses arguments, dispatches, and maps
// errors to exit codes (0 ok, 1 data, 2 provider, 3 usage).
int run(int argc, const char* const* argv);

}  // namespace stylebench::cli
