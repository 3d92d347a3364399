#include "stylebench/predictors.hpp"

#include <numeric>
#include <stdexcept>

#include "stylebench/util/rng.hpp"

namespace stylebench::predictors {

int Prediction::change_count() const {
    return std::accumulate(changes.begin(), changes.end(), 0);
}

Prediction all_changes(std::size_t n_boundaries) {
    if (n_boundaries == 0) throw std::invalid_argument("all_changes: need at least one boundary");
    Prediction p;
    p.backend_id = "baseline:all";
    p.changes.assign(n_boundaries, 1);
    return p;
}

Prediction no_changes(std::size_t n_boundaries) {
    if (n_boundaries == 0) throw std::invalid_argument("no_changes: need at least one boundary");
    Prediction p;
    p.backend_id = "baseline:none";
    p.changes.assign(n_boundaries, 0);
    return p;
}

Prediction random_k(std::size_t n_boundaries, std::size_t k, std::uint64_t seed) {
    if (n_boundaries == 0) throw std::invalid_argument("random_k: need at least one boundary");
    Prediction p;
    p.backend_id = "baseline:rand" + std::to_string(k);
    p.changes.assign(n_boundaries, 0);
    util::Rng rng(seed);
    for (std::size_t i : rng.sample_indices(n_boundaries, k)) p.changes[i] = 1;
    return p;
}

Prediction threshold_on_similarity(const std::vector<double>& adjacent_similarities, double theta) {
    if (adjacent_similarities.empty())
        throw std::invalid_argument("threshold_on_similarity: empty similarity vector");
    for (double s : adjacent_similarities)
        if (s < -1.0 || s > 1.0)
            throw std::invalid_argument("threshold_on_similarity: similarity outside [-1,1]");
    Prediction p;
    p.backend_id = "baseline:simthresh";
    p.changes.reserve(adjacent_similarities.size());
    for (double s : adjacent_similarities) p.changes.push_back(s < theta ? 1 : 0);
    return p;
}

}  // namespace stylebench::predictors
