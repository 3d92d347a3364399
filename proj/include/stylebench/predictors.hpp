#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stylebench::predictors {

// A predictor's binary change vector for one problem, tagged with the
// backend that produced it and any repair applied to the raw response.
struct Prediction {
    std::string problem_id;
    std::string backend_id;
    std::vector<int> changes;
    bool repaired = false;
    std::string repair_kind = "none";
    std::optional<std::string> raw_response;
    std::optional<double> latency_ms;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;

    int change_count() const;
};

// Constant baseline: a change at every boundary. Throws on n == 0.
Prediction all_changes(std::size_t n_boundaries);

// Constant baseline: never a change. Throws on n == 0.
Prediction no_changes(std::size_t n_boundaries);

// Exactly min(k, n) ones placed uniformly at random without replacement.
// The draw is a pure function of the seed (portable PRNG stream).
Prediction random_k(std::size_t n_boundaries, std::size_t k, std::uint64_t seed);

// Embedding-path smoke predictor: change wherever adjacent similarity drops
// below theta. Similarities must lie in [-1, 1].
Prediction threshold_on_similarity(const std::vector<double>& adjacent_similarities, double theta);

}  // namespace stylebench::predictors
