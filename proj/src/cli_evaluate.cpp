#include "cli_internal.hpp"

#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/tabular.hpp"

#include <iostream>
#include <map>

namespace stylebench::cli {

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    }
    return out;
}

std::vector<std::string> summary_header() {
    return {"schema_version",
            "backend",
            "difficulty",
            "split",
            "granularity",
            "problems",
            "boundaries",
            "macro_f1",
            "f1_change",
            "f1_no_change",
            "precision_change",
            "recall_change",
            "precision_no_change",
            "recall_no_change",
            "hamming_mean",
            "per_problem_macro_f1_mean",
            "missing",
            "failed"};
}

std::vector<std::string> summary_row(const evaluation::EvalReport& report) {
    using util::format_g;
    return {"1",
            report.backend_id,
            corpus::to_string(report.difficulty),
            corpus::to_string(report.split),
            corpus::to_string(report.granularity),
            std::to_string(report.records.size()),
            std::to_string(report.pooled.total_boundaries),
            format_g(report.pooled.macro_f1),
            format_g(report.pooled.change.f1),
            format_g(report.pooled.no_change.f1),
            format_g(report.pooled.change.precision),
            format_g(report.pooled.change.recall),
            format_g(report.pooled.no_change.precision),
            format_g(report.pooled.no_change.recall),
            format_g(report.hamming_mean),
            format_g(report.per_problem_macro_f1_mean),
            std::to_string(report.missing.size()),
            std::to_string(report.failed)};
}

void write_records(const std::filesystem::path& path, const evaluation::EvalReport& report) {
    std::vector<nlohmann::json> rows;
    rows.reserve(report.records.size());
    for (const auto& r : report.records) {
        rows.push_back({
            {"schema_version", 1},
            {"problem_id", r.problem_id},
            {"hamming_norm", r.hamming_norm},
            {"num_authors", r.num_authors},
            {"num_changes", r.num_changes},
            {"num_changes_pred", r.num_changes_pred},
            {"num_units", r.num_units},
        });
    }
    util::write_jsonl(path, rows);
}

}  // namespace

int cmd_evaluate(const EvaluateArgs& args) {
    if (args.run_dirs.empty()) {
        throw UsageError("evaluate needs at least one run directory");
    }
    if (args.run_dirs.size() > 1 && !args.out) {
        throw UsageError("evaluating multiple runs requires --out for the combined report");
    }
    const std::filesystem::path out = args.out ? *args.out : args.run_dirs.front();
    std::filesystem::create_directories(out);
    DirLock lock(out);

    // Datasets cached per coordinates so evaluating many runs over the same
    // corpus loads it once.
    std::map<std::string, corpus::Dataset> datasets;
    std::vector<evaluation::EvalReport> reports;

    for (const auto& run_dir : args.run_dirs) {
        nlohmann::json manifest = read_manifest(run_dir);
        DatasetCoords coords = coords_from_manifest(manifest, args.root_override);
        std::string key = coords.root.string() + "|" + coords.label();
        if (!datasets.count(key)) {
            datasets.emplace(key, load_coords(coords));
        }
        auto predictions = read_predictions(RunPaths{run_dir}.predictions());
        reports.push_back(evaluation::evaluate_run(datasets.at(key), predictions,
                                                   manifest.at("backend_id").get<std::string>(),
                                                   args.denom));
    }

    util::CsvWriter summary;
    summary.header(summary_header());
    for (const auto& report : reports) {
        summary.row(summary_row(report));
    }
    summary.write_file((out / "eval_summary.csv").string());

    for (std::size_t i = 0; i < reports.size(); ++i) {
        auto name = reports.size() == 1
                        ? std::string("eval_records.jsonl")
                        : "eval_records_" + std::to_string(i) + "_" +
                              sanitize(reports[i].backend_id) + ".jsonl";
        write_records(out / name, reports[i]);
    }

    // Headline-metric pivot: one row per backend, one column per difficulty,
    // pooled boundary macro-F1 in the cells.
    std::vector<std::string> backends;
    std::map<std::string, std::map<std::string, std::string>> cells;
    for (const auto& report : reports) {
        if (!cells.count(report.backend_id)) {
            backends.push_back(report.backend_id);
        }
        cells[report.backend_id][corpus::to_string(report.difficulty)] =
            util::format_g(report.pooled.macro_f1);
    }
    util::CsvWriter pivot;
    pivot.header({"backend", "easy", "medium", "hard"});
    for (const auto& backend : backends) {
        auto& row = cells[backend];
        pivot.row({backend, row.count("easy") ? row["easy"] : "",
                       row.count("medium") ? row["medium"] : "",
                       row.count("hard") ? row["hard"] : ""});
    }
    pivot.write_file((out / "macro_f1_by_difficulty.csv").string());

    for (const auto& report : reports) {
        std::cout << report.backend_id << " " << corpus::to_string(report.difficulty) << "/"
                  << corpus::to_string(report.split) << ": macro_f1 "
                  << util::format_g(report.pooled.macro_f1) << ", hamming_mean "
                  << util::format_g(report.hamming_mean) << ", missing "
                  << report.missing.size() << ", failed " << report.failed << "\n";
    }
    std::cout << "wrote " << (out / "eval_summary.csv").string() << "\n";
    return kExitOk;
}

}  // namespace stylebench::cli
