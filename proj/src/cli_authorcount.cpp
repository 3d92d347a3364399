#include "cli_internal.hpp"

#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/tabular.hpp"

#include <iostream>

namespace stylebench::cli {

int cmd_authorcount(const AuthorCountArgs& args) {
    corpus::Dataset dataset = load_coords(args.coords);
    std::filesystem::create_directories(args.out);
    DirLock lock(args.out);

    auto provider = make_embedding_provider(args.provider, args.config);

    std::vector<authorcount::FeatureRow> rows;
    rows.reserve(dataset.size());
    for (const auto& [problem, truth] : dataset.problems) {
        auto vectors = semantics::embed(problem, *provider);
        auto prof = semantics::profile(problem, vectors, &truth);
        rows.push_back(authorcount::extract_features(problem, prof, truth, args.label_source));
    }

    std::vector<std::string> feature_header = {"schema_version", "problem_id"};
    for (const auto& name : authorcount::feature_names()) {
        feature_header.push_back(name);
    }
    feature_header.push_back("label");
    util::CsvWriter features_csv;
    features_csv.header(feature_header);
    for (const auto& row : rows) {
        std::vector<std::string> cells = {"1", row.problem_id};
        for (double f : row.features) {
            cells.push_back(util::format_g(f));
        }
        cells.push_back(authorcount::to_string(row.label));
        features_csv.row(cells);
    }
    features_csv.write_file((args.out / "features.csv").string());

    authorcount::CvResult cv = authorcount::cross_validate(rows, args.cv);

    util::CsvWriter metrics_csv;
    metrics_csv.header({"schema_version", "dataset", "class", "precision_mean", "recall_mean",
                        "f1_mean", "support", "n_splits", "test_fraction"});
    for (const auto& m : cv.per_class) {
        metrics_csv.row({"1", args.coords.label(), authorcount::to_string(m.category),
                             util::format_g(m.precision_mean), util::format_g(m.recall_mean),
                             util::format_g(m.f1_mean), std::to_string(m.support),
                             std::to_string(cv.n_splits), util::format_g(cv.test_fraction)});
    }
    metrics_csv.row({"1", args.coords.label(), "macro", "", "",
                         util::format_g(cv.macro_f1_mean), std::to_string(rows.size()),
                         std::to_string(cv.n_splits), util::format_g(cv.test_fraction)});
    metrics_csv.write_file((args.out / "authorcount_metrics.csv").string());

    // Final model fit on every row, for later reuse on unlabeled problems.
    authorcount::BoostedTreesModel model =
        authorcount::train(rows, args.cv.params, args.cv.seed);
    util::write_file_atomic(args.out / "model.json",
                            authorcount::to_json(model).dump(2) + "\n");

    std::cout << "author-count classifier on " << args.coords.label() << " ("
              << provider->id() << " features, " << rows.size() << " rows):\n";
    for (const auto& m : cv.per_class) {
        std::cout << "  " << authorcount::to_string(m.category) << ": P "
                  << util::format_g(m.precision_mean) << ", R "
                  << util::format_g(m.recall_mean) << ", F1 " << util::format_g(m.f1_mean)
                  << " (support " << m.support << ")\n";
    }
    std::cout << "  macro F1 mean over " << cv.n_splits << " splits: "
              << util::format_g(cv.macro_f1_mean) << "\n";
    std::cout << "wrote " << (args.out / "authorcount_metrics.csv").string() << ", "
              << (args.out / "features.csv").string() << ", "
              << (args.out / "model.json").string() << "\n";
    return kExitOk;
}

}  // namespace stylebench::cli
