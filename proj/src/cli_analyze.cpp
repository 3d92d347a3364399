#include "cli_internal.hpp"

#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/tabular.hpp"

#include <iostream>
#include <map>

namespace stylebench::cli {

namespace {

const std::vector<std::string> kCorrColumns = {"pearson_r", "spearman_rho", "kendall_tau",
                                               "p_pearson", "p_spearman",  "p_kendall",
                                               "n",         "significant"};

// The eight correlation cells shared by both tables; empty strings when the
// correlation is undefined (constant input and the like).
std::vector<std::string> corr_cells(const std::optional<analysis::CorrelationTriple>& corr,
                                    std::size_t fallback_n) {
    using util::format_g;
    if (!corr) {
        return {"", "", "", "", "", "", std::to_string(fallback_n), ""};
    }
    return {format_g(corr->pearson_r),
            format_g(corr->spearman_rho),
            format_g(corr->kendall_tau),
            format_g(corr->p_pearson),
            format_g(corr->p_spearman),
            format_g(corr->p_kendall),
            std::to_string(corr->n),
            corr->significant() ? "1" : "0"};
}

}  // namespace

int cmd_analyze(const AnalyzeArgs& args) {
    nlohmann::json manifest = read_manifest(args.run_dir);
    DatasetCoords coords = coords_from_manifest(manifest, args.root_override);
    corpus::Dataset dataset = load_coords(coords);
    const std::string backend_id = manifest.at("backend_id").get<std::string>();
    auto predictions = read_predictions(RunPaths{args.run_dir}.predictions());

    const std::filesystem::path out = args.out ? *args.out : args.run_dir;
    std::filesystem::create_directories(out);
    DirLock lock(out);

    auto provider = make_embedding_provider(args.provider, args.config);

    // Per-problem similarity profiles over the whole dataset.
    std::vector<semantics::SimilarityProfile> profiles;
    profiles.reserve(dataset.size());
    for (const auto& [problem, truth] : dataset.problems) {
        auto vectors = semantics::embed(problem, *provider);
        profiles.push_back(semantics::profile(problem, vectors, &truth));
    }

    util::CsvWriter profile_csv;
    profile_csv.header({"schema_version", "problem_id", "provider_id", "num_units",
                        "avg_all_pairs", "avg_switch_pairs", "avg_adjacent",
                        "mean_pairwise_distance"});
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        profile_csv.row({"1", p.problem_id, provider->id(),
                             std::to_string(dataset.problems[i].first.units.size()),
                             util::format_g(p.avg_all_pairs),
                             p.avg_switch_pairs ? util::format_g(*p.avg_switch_pairs) : "",
                             util::format_g(p.avg_adjacent),
                             util::format_g(p.mean_pairwise_distance)});
    }
    profile_csv.write_file((out / "profiles.csv").string());

    // Error-driver table: per-problem parameters against normalized Hamming.
    evaluation::EvalReport report =
        evaluation::evaluate_run(dataset, predictions, backend_id);
    const std::string units_name = coords.granularity == corpus::Granularity::sentence
                                       ? "num_sentences"
                                       : "num_paragraphs";
    auto feature_rows = analysis::hamming_feature_table(report.records, units_name);

    std::vector<std::string> hamming_header = {"schema_version", "dataset", "feature"};
    hamming_header.insert(hamming_header.end(), kCorrColumns.begin(), kCorrColumns.end());
    hamming_header.push_back("note");
    util::CsvWriter hamming_csv;
    hamming_csv.header(hamming_header);
    for (const auto& row : feature_rows) {
        std::vector<std::string> cells = {"1", coords.label(), row.feature};
        auto corr = corr_cells(row.corr, report.records.size());
        cells.insert(cells.end(), corr.begin(), corr.end());
        cells.push_back(row.note);
        hamming_csv.row(cells);
    }
    hamming_csv.write_file((out / "hamming_correlations.csv").string());

    // Switch-similarity table: adjacent-pair similarities pooled over every
    // problem that has a usable prediction, against predicted and true labels.
    std::map<std::string, const predictors::Prediction*> by_id;
    for (const auto& p : predictions) {
        if (!p.changes.empty()) {
            by_id[p.problem_id] = &p;
        }
    }
    std::vector<double> pooled_sims;
    std::vector<int> pooled_predicted;
    std::vector<int> pooled_truth;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& [problem, truth] = dataset.problems[i];
        auto it = by_id.find(problem.id);
        if (it == by_id.end()) {
            continue;
        }
        const auto& sims = profiles[i].adjacent_sims;
        pooled_sims.insert(pooled_sims.end(), sims.begin(), sims.end());
        pooled_predicted.insert(pooled_predicted.end(), it->second->changes.begin(),
                                it->second->changes.end());
        pooled_truth.insert(pooled_truth.end(), truth.changes.begin(), truth.changes.end());
    }

    std::vector<std::string> switch_header = {"schema_version", "dataset", "provider_id",
                                              "labels"};
    switch_header.insert(switch_header.end(), kCorrColumns.begin(), kCorrColumns.end());
    switch_header.push_back("note");
    util::CsvWriter switch_csv;
    switch_csv.header(switch_header);
    for (const auto& row :
         analysis::switch_correlation_table(pooled_sims, pooled_predicted, pooled_truth)) {
        std::vector<std::string> cells = {
            "1", coords.label(), provider->id(),
            row.source == analysis::LabelSource::predicted ? "predicted" : "truth"};
        auto corr = corr_cells(row.corr, row.n);
        cells.insert(cells.end(), corr.begin(), corr.end());
        cells.push_back(row.note);
        switch_csv.row(cells);
    }
    switch_csv.write_file((out / "similarity_correlations.csv").string());

    std::cout << "analyzed " << backend_id << " on " << coords.label() << " with "
              << provider->id() << " embeddings\n";
    std::cout << "wrote " << (out / "profiles.csv").string() << ", "
              << (out / "hamming_correlations.csv").string() << ", "
              << (out / "similarity_correlations.csv").string() << "\n";
    return kExitOk;
}

}  // namespace stylebench::cli
