// Python bindings for the core scoring, prompting, parsing, similarity, and
// author-count operations. File/corpus handling and network providers stay in
// the C++ CLI; these bindings cover the pure in-memory operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stylebench/analysis.hpp"
#include "stylebench/authorcount.hpp"
#include "stylebench/corpus.hpp"
#include "stylebench/evaluation.hpp"
#include "stylebench/llm.hpp"
#include "stylebench/predictors.hpp"
#include "stylebench/semantics.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace stylebench;

namespace {

corpus::Granularity granularity_arg(const std::string& s) {
    return corpus::granularity_from_string(s);
}

llm::PromptConfig prompt_config(const std::string& granularity, int assumed_changes_hint,
                                std::optional<int> injected_author_count,
                                bool include_feature_list) {
    llm::PromptConfig config;
    config.granularity = granularity_arg(granularity);
    config.assumed_changes_hint = assumed_changes_hint;
    config.injected_author_count = injected_author_count;
    config.include_feature_list = include_feature_list;
    return config;
}

py::dict triple_dict(const analysis::CorrelationTriple& c) {
    py::dict d;
    d["pearson_r"] = c.pearson_r;
    d["spearman_rho"] = c.spearman_rho;
    d["kendall_tau"] = c.kendall_tau;
    d["p_pearson"] = c.p_pearson;
    d["p_spearman"] = c.p_spearman;
    d["p_kendall"] = c.p_kendall;
    d["n"] = c.n;
    d["significant"] = c.significant();
    return d;
}

semantics::SimilarityProfile profile_of(const std::vector<std::string>& units,
                                        const std::optional<std::vector<int>>& truth_changes) {
    corpus::Problem problem;
    problem.id = "<memory>";
    problem.units = units;
    semantics::FallbackEmbedder embedder;
    auto vectors = semantics::embed(problem, embedder);
    if (!truth_changes) {
        return semantics::profile(problem, vectors);
    }
    corpus::TruthAnnotation truth;
    truth.problem_id = problem.id;
    truth.changes = *truth_changes;
    truth.author_count = truth.change_count() + 1;
    return semantics::profile(problem, vectors, &truth);
}

py::dict profile_dict(const semantics::SimilarityProfile& p) {
    py::dict d;
    d["avg_all_pairs"] = p.avg_all_pairs;
    d["avg_adjacent"] = p.avg_adjacent;
    d["mean_pairwise_distance"] = p.mean_pairwise_distance;
    d["adjacent_sims"] = p.adjacent_sims;
    if (p.avg_switch_pairs) {
        d["avg_switch_pairs"] = *p.avg_switch_pairs;
    } else {
        d["avg_switch_pairs"] = py::none();
    }
    return d;
}

std::vector<authorcount::FeatureRow> rows_from(
    const std::vector<std::vector<double>>& features, const std::vector<int>& labels) {
    if (features.size() != labels.size()) {
        throw std::invalid_argument("features and labels must have the same length");
    }
    std::vector<authorcount::FeatureRow> rows;
    rows.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        authorcount::FeatureRow row;
        row.problem_id = std::to_string(i);
        row.features = features[i];
        row.label = authorcount::categorize(labels[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_stylebench, m) {
    m.doc() = "style change detection scoring, prompting, and analysis primitives";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const llm::ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    // --- scoring ---
    m.def(
        "macro_f1",
        [](const std::vector<evaluation::LabelPair>& pairs) {
            const auto r = evaluation::macro_f1(pairs);
            py::dict d;
            d["macro_f1"] = r.macro_f1;
            d["f1_change"] = r.change.f1;
            d["f1_no_change"] = r.no_change.f1;
            d["precision_change"] = r.change.precision;
            d["recall_change"] = r.change.recall;
            d["precision_no_change"] = r.no_change.precision;
            d["recall_no_change"] = r.no_change.recall;
            d["total_boundaries"] = r.total_boundaries;
            return d;
        },
        py::arg("pairs"),
        "Boundary macro-F1 pooled over (truth, prediction) label pairs.");

    m.def(
        "hamming_norm",
        [](const std::vector<int>& truth, const std::vector<int>& prediction,
           const std::string& denominator) {
            const auto denom = denominator == "units" ? evaluation::HammingDenominator::units
                                                      : evaluation::HammingDenominator::boundaries;
            if (denominator != "units" && denominator != "boundaries") {
                throw std::invalid_argument("denominator must be 'boundaries' or 'units'");
            }
            return evaluation::hamming_norm(truth, prediction, denom);
        },
        py::arg("truth"), py::arg("prediction"), py::arg("denominator") = "boundaries",
        "Normalized Hamming distance between two change vectors.");

    // --- correlation ---
    m.def(
        "correlations",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return triple_dict(analysis::correlations(x, y));
        },
        py::arg("x"), py::arg("y"),
        "Pearson, Spearman, and Kendall tau-b with two-sided p-values.");
    m.def("average_ranks", &analysis::average_ranks, py::arg("values"),
          "1-based average ranks; ties share the mean of the ranks they span.");

    // --- prompting ---
    m.def(
        "build_prompt",
        [](const std::vector<std::string>& units, const std::string& granularity,
           int assumed_changes_hint, std::optional<int> injected_author_count,
           bool include_feature_list) {
            return llm::build_prompt(units,
                                     prompt_config(granularity, assumed_changes_hint,
                                                   injected_author_count, include_feature_list));
        },
        py::arg("units"), py::arg("granularity") = "sentence",
        py::arg("assumed_changes_hint") = 3, py::arg("injected_author_count") = py::none(),
        py::arg("include_feature_list") = true,
        "Render the zero-shot detection prompt for one problem.");
    m.def(
        "prompt_digest",
        [](const std::string& granularity, int assumed_changes_hint,
           std::optional<int> injected_author_count, bool include_feature_list) {
            return llm::prompt_digest(prompt_config(granularity, assumed_changes_hint,
                                                    injected_author_count,
                                                    include_feature_list));
        },
        py::arg("granularity") = "sentence", py::arg("assumed_changes_hint") = 3,
        py::arg("injected_author_count") = py::none(), py::arg("include_feature_list") = true,
        "Stable digest of the prompt template and its configuration.");

    m.def(
        "parse_changes",
        [](const std::string& response, std::size_t expected_len, bool strict) {
            const auto r = llm::parse_changes(response, expected_len, strict);
            py::dict d;
            d["changes"] = r.changes;
            d["repaired"] = r.repaired;
            d["repair_kind"] = r.repair_kind;
            return d;
        },
        py::arg("response"), py::arg("expected_len"), py::arg("strict") = false,
        "Recover a binary change vector from a model response (raises ValueError).");

    // --- baselines ---
    m.def(
        "all_changes", [](std::size_t n) { return predictors::all_changes(n).changes; },
        py::arg("n_boundaries"));
    m.def(
        "no_changes", [](std::size_t n) { return predictors::no_changes(n).changes; },
        py::arg("n_boundaries"));
    m.def(
        "random_k_changes",
        [](std::size_t n, std::size_t k, std::uint64_t seed) {
            return predictors::random_k(n, k, seed).changes;
        },
        py::arg("n_boundaries"), py::arg("k"), py::arg("seed"),
        "k switches at seeded uniform positions (fewer when k > n).");

    // --- similarity ---
    m.def("cosine",
          py::overload_cast<const std::vector<double>&, const std::vector<double>&>(
              &semantics::cosine),
          py::arg("u"), py::arg("v"), "Cosine similarity, clamped to [-1, 1].");
    m.def(
        "embed_units",
        [](const std::vector<std::string>& units) {
            semantics::FallbackEmbedder embedder;
            std::vector<std::vector<double>> out;
            for (auto& v : embedder.embed(units)) out.push_back(std::move(v.values));
            return out;
        },
        py::arg("units"),
        "Deterministic offline trigram-hash embeddings (not a semantic model).");
    m.def(
        "similarity_profile",
        [](const std::vector<std::string>& units,
           const std::optional<std::vector<int>>& truth_changes) {
            return profile_dict(profile_of(units, truth_changes));
        },
        py::arg("units"), py::arg("truth_changes") = py::none(),
        "Per-problem similarity statistics from offline embeddings.");

    // --- author count ---
    m.def("count_syllables", &authorcount::count_syllables, py::arg("word"));
    m.def(
        "readability",
        [](const std::vector<std::string>& units) {
            const auto r = authorcount::readability(units);
            py::dict d;
            d["flesch_reading_ease"] = r.flesch_reading_ease;
            d["flesch_kincaid_grade"] = r.flesch_kincaid_grade;
            d["avg_words_per_unit"] = r.avg_words_per_unit;
            d["avg_syllables_per_word"] = r.avg_syllables_per_word;
            d["type_token_ratio"] = r.type_token_ratio;
            d["punctuation_density"] = r.punctuation_density;
            return d;
        },
        py::arg("units"), "Readability statistics treating each unit as one sentence.");
    m.def("author_count_feature_names", [] { return authorcount::feature_names(); });
    m.def(
        "author_count_features",
        [](const std::vector<std::string>& units, const std::vector<int>& truth_changes,
           int authors) {
            corpus::Problem problem;
            problem.id = "<memory>";
            problem.units = units;
            corpus::TruthAnnotation truth;
            truth.problem_id = problem.id;
            truth.changes = truth_changes;
            truth.author_count = authors;
            const auto prof = profile_of(units, truth_changes);
            return authorcount::extract_features(problem, prof, truth).features;
        },
        py::arg("units"), py::arg("truth_changes"), py::arg("authors"),
        "The 24-column feature vector used by the author-count classifier.");
    m.def(
        "train_author_count",
        [](const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
           int rounds, int max_depth, double learning_rate, double l2_reg,
           std::uint64_t seed) {
            authorcount::TrainParams params;
            params.rounds = rounds;
            params.max_depth = max_depth;
            params.learning_rate = learning_rate;
            params.l2_reg = l2_reg;
            const auto model = authorcount::train(rows_from(features, labels), params, seed);
            return authorcount::to_json(model).dump();
        },
        py::arg("features"), py::arg("labels"), py::arg("rounds") = 200,
        py::arg("max_depth") = 4, py::arg("learning_rate") = 0.1, py::arg("l2_reg") = 1.0,
        py::arg("seed") = 0,
        "Train the boosted-trees category classifier; labels are raw counts, "
        "bucketed into {1-2, 3-4, 5+}. Returns the serialized model as JSON.");
    m.def(
        "predict_author_count",
        [](const std::string& model_json, const std::vector<double>& features) {
            const auto model = authorcount::model_from_json(nlohmann::json::parse(model_json));
            authorcount::FeatureRow row;
            row.features = features;
            const auto scored = authorcount::predict(model, row);
            py::dict d;
            d["category"] = authorcount::to_string(scored.category);
            d["probabilities"] = scored.probabilities;
            return d;
        },
        py::arg("model_json"), py::arg("features"),
        "Category and class probabilities from a serialized model.");
}
