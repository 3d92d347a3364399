#include "cli_internal.hpp"

#include "stylebench/net.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace stylebench::cli {

namespace {

struct CoordsOpts {
    std::string root;
    std::string difficulty = "easy";
    std::string split = "train";
    std::string granularity = "sentence";
};

void add_coords(CLI::App* cmd, CoordsOpts& opts) {
    cmd->add_option("--root", opts.root, "corpus root directory")->required();
    cmd->add_option("--difficulty", opts.difficulty, "easy|medium|hard")
        ->check(CLI::IsMember({"easy", "medium", "hard"}));
    cmd->add_option("--split", opts.split, "train|validation|test")
        ->check(CLI::IsMember({"train", "validation", "test"}));
    cmd->add_option("--granularity", opts.granularity,
                    "unit kind of the problem files: sentence|paragraph")
        ->check(CLI::IsMember({"sentence", "paragraph"}));
}

DatasetCoords to_coords(const CoordsOpts& opts) {
    DatasetCoords coords;
    coords.root = opts.root;
    coords.difficulty = corpus::difficulty_from_string(opts.difficulty);
    coords.split = corpus::split_from_string(opts.split);
    coords.granularity = corpus::granularity_from_string(opts.granularity);
    return coords;
}

std::optional<std::filesystem::path> to_path(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return std::filesystem::path(s);
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"benchmark harness for multi-author style change detection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "stylebench 0.1.0");

    std::string config_file;

    // --- validate ---
    auto* validate = app.add_subcommand("validate", "check a corpus against the data contract");
    CoordsOpts validate_coords;
    add_coords(validate, validate_coords);

    // --- explore ---
    auto* explore =
        app.add_subcommand("explore", "summarize change/author histograms and unit counts");
    CoordsOpts explore_coords;
    std::string explore_out;
    add_coords(explore, explore_coords);
    explore->add_option("--out", explore_out, "output directory")->required();

    // --- predict ---
    auto* predict = app.add_subcommand("predict", "run a predictor over a dataset");
    CoordsOpts predict_coords;
    add_coords(predict, predict_coords);
    std::string backend;
    std::string run_dir;
    std::string cache_dir;
    std::string replay_dir;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 0;
    int parallelism = -1;
    bool strict_parse = false;
    bool no_raw = false;
    int hint = 3;
    std::optional<int> injected_author_count;
    bool no_feature_list = false;
    predict
        ->add_option("--backend", backend,
                     "baseline:all | baseline:none | baseline:rand<k> | llm:<model> | replay")
        ->required();
    predict->add_option("--run-dir", run_dir, "run directory for predictions + manifest")
        ->required();
    predict->add_option("--sample", sample, "run on a seeded subsample of this many problems");
    predict->add_option("--seed", seed, "seed for sampling and random baselines");
    predict->add_option("--parallelism", parallelism, "worker threads (default from config)");
    predict->add_option("--cache-dir", cache_dir, "disk cache for raw model responses");
    predict->add_option("--replay-dir", replay_dir,
                        "directory of recorded responses (<problem_id>.txt) for backend replay");
    predict->add_flag("--strict-parse", strict_parse,
                      "treat wrong-length change vectors as failures instead of repairing them");
    predict->add_flag("--no-raw", no_raw, "do not persist raw responses in predictions.jsonl");
    predict->add_option("--hint", hint, "expected-changes hint rendered into the prompt");
    predict->add_option("--injected-author-count", injected_author_count,
                        "override the hint with an externally predicted author count");
    predict->add_flag("--no-feature-list", no_feature_list,
                      "omit the stylistic-feature checklist from the prompt");
    predict->add_option("--config", config_file, "JSON config file");

    // --- evaluate ---
    auto* evaluate = app.add_subcommand("evaluate", "score one or more runs against truth");
    std::vector<std::string> eval_dirs;
    std::string eval_out;
    std::string eval_root;
    std::string denom = "boundaries";
    evaluate->add_option("run_dirs", eval_dirs, "run directories to score")->required();
    evaluate->add_option("--out", eval_out,
                         "report directory (default: the single run directory)");
    evaluate->add_option("--root", eval_root, "override the corpus root from the manifest");
    evaluate->add_option("--hamming-denominator", denom, "boundaries|units")
        ->check(CLI::IsMember({"boundaries", "units"}));

    // --- analyze ---
    auto* analyze =
        app.add_subcommand("analyze", "similarity profiles and correlation tables for a run");
    std::string analyze_run_dir;
    std::string analyze_out;
    std::string analyze_root;
    std::string analyze_provider = "fallback";
    analyze->add_option("--run-dir", analyze_run_dir, "run directory to analyze")->required();
    analyze->add_option("--out", analyze_out, "output directory (default: run directory)");
    analyze->add_option("--root", analyze_root, "override the corpus root from the manifest");
    analyze->add_option("--provider", analyze_provider,
                        "embedding provider: fallback | precomputed:<file> | remote");
    analyze->add_option("--config", config_file, "JSON config file");

    // --- authorcount ---
    auto* authorcount_cmd = app.add_subcommand(
        "authorcount", "train/evaluate the author-count category classifier");
    CoordsOpts ac_coords;
    add_coords(authorcount_cmd, ac_coords);
    std::string ac_out;
    std::string ac_provider = "fallback";
    std::string ac_label_source = "authors";
    authorcount::CvConfig cv;
    authorcount_cmd->add_option("--out", ac_out, "output directory")->required();
    authorcount_cmd->add_option("--provider", ac_provider,
                                "embedding provider: fallback | precomputed:<file> | remote");
    authorcount_cmd->add_option("--splits", cv.n_splits, "number of stratified shuffle splits");
    authorcount_cmd->add_option("--test-fraction", cv.test_fraction, "holdout fraction");
    authorcount_cmd->add_option("--seed", cv.seed, "master seed for splits");
    authorcount_cmd->add_option("--parallelism", cv.parallelism, "splits trained in parallel");
    authorcount_cmd->add_option("--rounds", cv.params.rounds, "boosting rounds");
    authorcount_cmd->add_option("--depth", cv.params.max_depth, "max tree depth");
    authorcount_cmd->add_option("--learning-rate", cv.params.learning_rate, "shrinkage");
    authorcount_cmd->add_option("--l2", cv.params.l2_reg, "leaf L2 regularization");
    authorcount_cmd
        ->add_option("--label-source", ac_label_source,
                     "categorize by authors (default) or by changes")
        ->check(CLI::IsMember({"authors", "changes"}));
    authorcount_cmd->add_option("--config", config_file, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) {
            return cmd_validate({to_coords(validate_coords)});
        }
        if (app.got_subcommand(explore)) {
            return cmd_explore({to_coords(explore_coords), explore_out});
        }
        if (app.got_subcommand(predict)) {
            PredictArgs args;
            args.coords = to_coords(predict_coords);
            args.backend = backend;
            args.run_dir = run_dir;
            args.sample = sample;
            args.seed = seed;
            args.config = load_config(to_path(config_file));
            args.parallelism = parallelism > 0 ? parallelism : args.config.parallelism;
            args.cache_dir = to_path(cache_dir);
            args.replay_dir = to_path(replay_dir);
            args.strict_parse = strict_parse;
            args.store_raw = !no_raw;
            args.prompt.granularity = args.coords.granularity;
            args.prompt.assumed_changes_hint = hint;
            args.prompt.injected_author_count = injected_author_count;
            args.prompt.include_feature_list = !no_feature_list;
            return cmd_predict(args);
        }
        if (app.got_subcommand(evaluate)) {
            EvaluateArgs args;
            for (const auto& dir : eval_dirs) {
                args.run_dirs.emplace_back(dir);
            }
            args.out = to_path(eval_out);
            args.root_override = to_path(eval_root);
            args.denom = denom == "units" ? evaluation::HammingDenominator::units
                                          : evaluation::HammingDenominator::boundaries;
            return cmd_evaluate(args);
        }
        if (app.got_subcommand(analyze)) {
            AnalyzeArgs args;
            args.run_dir = analyze_run_dir;
            args.out = to_path(analyze_out);
            args.root_override = to_path(analyze_root);
            args.provider = analyze_provider;
            args.config = load_config(to_path(config_file));
            return cmd_analyze(args);
        }
        if (app.got_subcommand(authorcount_cmd)) {
            AuthorCountArgs args;
            args.coords = to_coords(ac_coords);
            args.out = ac_out;
            args.provider = ac_provider;
            args.cv = cv;
            args.label_source = ac_label_source == "changes"
                                    ? authorcount::LabelSource::changes
                                    : authorcount::LabelSource::authors;
            args.config = load_config(to_path(config_file));
            return cmd_authorcount(args);
        }
        std::cerr << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const net::ProviderError& e) {
        std::cerr << "provider error (" << net::to_string(e.kind()) << "): " << e.what()
                  << "\n";
        return kExitProviderFailure;
    } catch (const corpus::CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& violation : e.violations()) {
            std::cerr << "  " << violation.to_string() << "\n";
        }
        return kExitDataFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataFailure;
    }
}

}  // namespace stylebench::cli
