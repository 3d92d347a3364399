#pragma once

#include "stylebench/corpus.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stylebench::semantics {

struct EmbeddingVector {
    std::vector<double> values;
    std::string provider_id;
    std::string unit_digest;

    std::size_t dim() const { return values.size(); }
};

// Per-problem similarity statistics derived from unit embeddings:
// mean cosine over all unordered pairs, over adjacent pairs, over adjacent
// pairs at a true author switch (absent without truth or switches), and the
// mean pairwise cosine distance (complement of the all-pairs mean).
struct SimilarityProfile {
    std::string problem_id;
    std::vector<double> adjacent_sims;  // one per boundary, in order
    double avg_all_pairs = 0.0;
    std::optional<double> avg_switch_pairs;
    double avg_adjacent = 0.0;
    double mean_pairwise_distance = 0.0;
};

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    // Stable identity recorded on every vector and report row.
    virtual std::string id() const = 0;
    // One vector per unit, unit order preserved.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& units) = 0;
};

// Deterministic offline embedder: hashed character-trigram frequencies over
// the raw bytes (FNV-1a bucketed into a fixed 256-dim vector, L2-normalized).
// Platform-stable by construction; useful for tests and smoke runs, but not a
// semantic model — reports carry its id so nobody mistakes it for one.
class FallbackEmbedder : public EmbeddingProvider {
  public:
    static constexpr std::size_t kDim = 256;

    std::string id() const override;
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& units) override;
};

// Looks vectors up in a file of precomputed embeddings. Line format:
//   <unit-sha256> <dim> <component...>
// Blank lines and lines starting with '#' are skipped.
class PrecomputedEmbedder : public EmbeddingProvider {
  public:
    explicit PrecomputedEmbedder(const std::filesystem::path& file,
                                 std::string id = "precomputed");

    std::string id() const override;
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& units) override;

  private:
    std::string id_;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct EmbeddingConfig {
    std::string model = "text-embedding-3-small";
    std::string endpoint = "https://api.openai.com/v1";
    std::string api_key_env = "STYLEBENCH_API_KEY";
    double timeout_seconds = 120.0;
    int max_retries = 3;
    int requests_per_minute = 60;  // 0 = unlimited
    int backoff_base_ms = 500;
    int batch_size = 128;  // units per request
    // Vectors are cached on disk by unit digest; identical units never hit
    // the provider twice.
    std::optional<std::filesystem::path> cache_dir;
};

// OpenAI-compatible /embeddings client with the same retry/backoff, rate
// limiting, and credential handling as the completion client.
class RemoteEmbedder : public EmbeddingProvider {
  public:
    explicit RemoteEmbedder(EmbeddingConfig config);
    ~RemoteEmbedder() override;

    std::string id() const override;
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& units) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Embeds every unit of the problem and enforces the cross-vector invariants
// (one vector per unit, consistent dimension).
std::vector<EmbeddingVector> embed(const corpus::Problem& problem, EmbeddingProvider& provider);

// Cosine similarity, clamped to [-1, 1] against rounding. Throws on
// dimension mismatch or zero vectors (a silent 0.0 would corrupt the
// downstream correlation tables).
double cosine(const std::vector<double>& u, const std::vector<double>& v);
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Computes the similarity profile for one problem. `truth` is optional;
// avg_switch_pairs is present only when truth marks at least one switch.
SimilarityProfile profile(const corpus::Problem& problem,
                          const std::vector<EmbeddingVector>& vectors,
                          const corpus::TruthAnnotation* truth = nullptr);

}  // namespace stylebench::semantics
