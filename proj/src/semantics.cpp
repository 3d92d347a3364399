#include "stylebench/semantics.hpp"

#include "stylebench/util/digest.hpp"
#include "stylebench/util/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stylebench::semantics {

std::string FallbackEmbedder::id() const { return "fallback:trigram256"; }

std::vector<EmbeddingVector> FallbackEmbedder::embed(const std::vector<std::string>& units) {
    std::vector<EmbeddingVector> out;
    out.reserve(units.size());
    for (const auto& unit : units) {
        std::vector<double> counts(kDim, 0.0);
        if (unit.size() < 3) {
            // Too short for a trigram: hash the whole string as one gram.
            counts[util::fnv1a64(unit) % kDim] += 1.0;
        } else {
            for (std::size_t i = 0; i + 3 <= unit.size(); ++i) {
                counts[util::fnv1a64(std::string_view(unit).substr(i, 3)) % kDim] += 1.0;
            }
        }
        double norm = 0.0;
        for (double c : counts) {
            norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& c : counts) {
                c /= norm;
            }
        }
        out.push_back({std::move(counts), id(), util::sha256_hex(unit)});
    }
    return out;
}

PrecomputedEmbedder::PrecomputedEmbedder(const std::filesystem::path& file, std::string id)
    : id_(std::move(id)) {
    std::ifstream in(file);
    if (!in) {
        throw std::runtime_error("cannot open precomputed vectors file: " + file.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string digest;
        std::size_t dim = 0;
        if (!(fields >> digest >> dim) || dim == 0) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected '<digest> <dim> <components...>'");
        }
        std::vector<double> values(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (!(fields >> values[i])) {
                throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                         ": fewer components than declared dim " +
                                         std::to_string(dim));
            }
        }
        vectors_[digest] = std::move(values);
    }
}

std::string PrecomputedEmbedder::id() const { return id_; }

std::vector<EmbeddingVector> PrecomputedEmbedder::embed(const std::vector<std::string>& units) {
    std::vector<EmbeddingVector> out;
    out.reserve(units.size());
    for (const auto& unit : units) {
        std::string digest = util::sha256_hex(unit);
        auto it = vectors_.find(digest);
        if (it == vectors_.end()) {
            throw std::runtime_error("precomputed vectors file has no entry for unit digest " +
                                     digest);
        }
        out.push_back({it->second, id_, std::move(digest)});
    }
    return out;
}

std::vector<EmbeddingVector> embed(const corpus::Problem& problem, EmbeddingProvider& provider) {
    std::vector<EmbeddingVector> vectors = provider.embed(problem.units);
    if (vectors.size() != problem.units.size()) {
        throw std::runtime_error("provider returned " + std::to_string(vectors.size()) +
                                 " vectors for " + std::to_string(problem.units.size()) +
                                 " units (problem " + problem.id + ")");
    }
    for (const auto& v : vectors) {
        if (v.dim() != vectors.front().dim()) {
            throw std::runtime_error("inconsistent embedding dimensions within problem " +
                                     problem.id);
        }
    }
    return vectors;
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(u.size()) +
                                    " vs " + std::to_string(v.size()) + ")");
    }
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        throw std::invalid_argument("cosine: zero vector");
    }
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
    return cosine(u.values, v.values);
}

SimilarityProfile profile(const corpus::Problem& problem,
                          const std::vector<EmbeddingVector>& vectors,
                          const corpus::TruthAnnotation* truth) {
    const std::size_t n = vectors.size();
    if (n < 2) {
        throw std::invalid_argument("profile requires at least two units (problem " +
                                    problem.id + ")");
    }
    if (n != problem.units.size()) {
        throw std::invalid_argument("vector count does not match unit count (problem " +
                                    problem.id + ")");
    }
    if (truth != nullptr && truth->changes.size() != n - 1) {
        throw std::invalid_argument("truth length does not match boundary count (problem " +
                                    problem.id + ")");
    }

    SimilarityProfile out;
    out.problem_id = problem.id;
    out.adjacent_sims.reserve(n - 1);

    // The all-pairs mean and the mean pairwise distance are accumulated
    // separately; their complement relationship is an invariant the tests
    // verify, not something baked in by computing one from the other.
    double sum_all = 0.0;
    double sum_dist = 0.0;
    std::size_t pair_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sim = cosine(vectors[i], vectors[j]);
            sum_all += sim;
            sum_dist += 1.0 - sim;
            ++pair_count;
            if (j == i + 1) {
                out.adjacent_sims.push_back(sim);
            }
        }
    }
    out.avg_all_pairs = sum_all / static_cast<double>(pair_count);
    out.mean_pairwise_distance = sum_dist / static_cast<double>(pair_count);

    double sum_adjacent = 0.0;
    for (double sim : out.adjacent_sims) {
        sum_adjacent += sim;
    }
    out.avg_adjacent = sum_adjacent / static_cast<double>(out.adjacent_sims.size());

    if (truth != nullptr) {
        double sum_switch = 0.0;
        std::size_t switch_count = 0;
        for (std::size_t b = 0; b < truth->changes.size(); ++b) {
            if (truth->changes[b] == 1) {
                sum_switch += out.adjacent_sims[b];
                ++switch_count;
            }
        }
        if (switch_count > 0) {
            out.avg_switch_pairs = sum_switch / static_cast<double>(switch_count);
        }
    }
    return out;
}

}  // namespace stylebench::semantics
