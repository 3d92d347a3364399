#include <doctest.h>

#include "stylebench/cli.hpp"
#include "stylebench/corpus.hpp"
#include "stylebench/evaluation.hpp"
#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/tabular.hpp"

#include <json.hpp>

#include "support.hpp"

#include <algorithm>
#include <string>
#include <vector>

using namespace stylebench;
using nlohmann::json;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("stylebench");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string mini_root() { return testsupport::fixture("corpus_mini").string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate: clean corpus passes, violations and bad paths fail") {
    CHECK(run_cli({"validate", "--root", mini_root(), "--difficulty", "easy", "--split",
                   "train"}) == cli::kExitOk);
    CHECK(run_cli({"validate", "--root", testsupport::fixture("corpus_bad").string(),
                   "--difficulty", "easy", "--split", "train"}) == cli::kExitDataFailure);
    CHECK(run_cli({"validate", "--root", "/nonexistent/corpus", "--difficulty", "easy",
                   "--split", "train"}) == cli::kExitDataFailure);
    // unknown difficulty is a usage error
    CHECK(run_cli({"validate", "--root", mini_root(), "--difficulty", "brutal", "--split",
                   "train"}) == cli::kExitUsage);
    // unknown subcommand / missing required flags
    CHECK(run_cli({"frobnicate"}) == cli::kExitUsage);
    CHECK(run_cli({"validate"}) == cli::kExitUsage);
}

TEST_CASE("explore writes the summary table") {
    testsupport::TempDir out;
    CHECK(run_cli({"explore", "--root", mini_root(), "--difficulty", "easy", "--split", "train",
                   "--out", out.path().string()}) == cli::kExitOk);
    auto csv = util::read_file(out / "dataset_summary.csv");
    CHECK(csv.find("author_count:2") != std::string::npos);
    CHECK(csv.find("change_count:3") != std::string::npos);
    CHECK(csv.find("unit_count_median,6.5") != std::string::npos);
}

TEST_CASE("baseline predict + evaluate end to end, idempotent reruns") {
    testsupport::TempDir tmp;
    auto run_dir = (tmp / "run-none").string();

    REQUIRE(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split",
                     "train", "--backend", "baseline:none", "--run-dir", run_dir}) ==
            cli::kExitOk);

    cli::RunPaths paths{run_dir};
    REQUIRE(std::filesystem::exists(paths.manifest()));
    REQUIRE(std::filesystem::exists(paths.predictions()));

    auto manifest = json::parse(util::read_file(paths.manifest()));
    CHECK(manifest.at("backend_id") == "baseline:none");
    CHECK(manifest.at("difficulty") == "easy");
    CHECK(manifest.at("counts").at("ok") == 12);
    CHECK(manifest.at("counts").at("failed") == 0);

    // rerunning over a complete run changes nothing on disk
    const auto manifest_before = util::read_file(paths.manifest());
    const auto predictions_before = util::read_file(paths.predictions());
    REQUIRE(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split",
                     "train", "--backend", "baseline:none", "--run-dir", run_dir}) ==
            cli::kExitOk);
    CHECK(util::read_file(paths.manifest()) == manifest_before);
    CHECK(util::read_file(paths.predictions()) == predictions_before);

    // evaluate the run in place
    REQUIRE(run_cli({"evaluate", run_dir}) == cli::kExitOk);
    auto summary = util::read_file(paths.eval_summary());
    CHECK(summary.find("baseline:none") != std::string::npos);

    // the CSV carries the same pooled score the library computes
    auto ds = corpus::load_dataset(mini_root(), corpus::Difficulty::easy, corpus::Split::train,
                                   corpus::Granularity::sentence);
    auto preds = cli::read_predictions(paths.predictions());
    auto report = evaluation::evaluate_run(ds, preds, "baseline:none");
    CHECK(summary.find(util::format_g(report.pooled.macro_f1)) != std::string::npos);
    CHECK(summary.find(util::format_g(report.hamming_mean)) != std::string::npos);

    auto records = util::read_jsonl(paths.eval_records());
    CHECK(records.size() == 12);
    CHECK(records.front().at("problem_id") == "1");
}

TEST_CASE("random baseline prediction is seeded and reproducible") {
    testsupport::TempDir tmp;
    auto dir_a = (tmp / "a").string();
    auto dir_b = (tmp / "b").string();
    for (const auto& dir : {dir_a, dir_b}) {
        REQUIRE(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split",
                         "train", "--backend", "baseline:rand3", "--seed", "42", "--run-dir",
                         dir}) == cli::kExitOk);
    }
    auto rows_a = util::read_file(cli::RunPaths{dir_a}.predictions());
    auto rows_b = util::read_file(cli::RunPaths{dir_b}.predictions());
    CHECK(rows_a == rows_b);

    auto dir_c = (tmp / "c").string();
    REQUIRE(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split",
                     "train", "--backend", "baseline:rand3", "--seed", "43", "--run-dir",
                     dir_c}) == cli::kExitOk);
    CHECK(util::read_file(cli::RunPaths{dir_c}.predictions()) != rows_a);
}

TEST_CASE("replay predict + evaluate + analyze pipeline") {
    testsupport::TempDir tmp;
    auto run_dir = (tmp / "run-replay").string();

    REQUIRE(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split",
                     "train", "--backend", "replay", "--replay-dir",
                     testsupport::fixture("replay/easy_train").string(), "--run-dir", run_dir}) ==
            cli::kExitOk);

    cli::RunPaths paths{run_dir};
    auto manifest = json::parse(util::read_file(paths.manifest()));
    CHECK(manifest.at("backend_id") == "llm:replay");
    CHECK(manifest.at("counts").at("ok") == 11);
    CHECK(manifest.at("counts").at("failed") == 1);
    CHECK(manifest.at("counts").at("repaired") == 3);  // two padded + one truncated
    CHECK(manifest.contains("prompt_digest"));
    // credentials and their env values never land in the manifest
    CHECK(manifest.dump().find("api_key") == std::string::npos);

    auto preds = cli::read_predictions(paths.predictions());
    CHECK(preds.size() == 12);  // 11 ok + 1 failure row
    int failures = 0;
    for (const auto& p : preds) failures += p.changes.empty();
    CHECK(failures == 1);

    REQUIRE(run_cli({"evaluate", run_dir}) == cli::kExitOk);
    auto summary = util::read_file(paths.eval_summary());
    CHECK(summary.find("llm:replay") != std::string::npos);

    REQUIRE(run_cli({"analyze", "--run-dir", run_dir, "--provider", "fallback"}) == cli::kExitOk);
    CHECK(std::filesystem::exists(std::filesystem::path(run_dir) / "profiles.csv"));
    CHECK(std::filesystem::exists(std::filesystem::path(run_dir) / "hamming_correlations.csv"));
    CHECK(std::filesystem::exists(std::filesystem::path(run_dir) / "similarity_correlations.csv"));

    auto profiles = util::read_file(std::filesystem::path(run_dir) / "profiles.csv");
    CHECK(profiles.find("fallback:trigram256") != std::string::npos);
    auto hamming = util::read_file(std::filesystem::path(run_dir) / "hamming_correlations.csv");
    CHECK(hamming.find("num_authors") != std::string::npos);
    CHECK(hamming.find("num_sentences") != std::string::npos);
    auto sims = util::read_file(std::filesystem::path(run_dir) / "similarity_correlations.csv");
    CHECK(sims.find("predicted") != std::string::npos);
    CHECK(sims.find("truth") != std::string::npos);
}

TEST_CASE("full pipeline is byte-deterministic across independent runs") {
    std::vector<std::string> outputs;
    for (int round = 0; round < 2; ++round) {
        testsupport::TempDir tmp;
        auto run_dir = (tmp / "run").string();
        REQUIRE(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split",
                         "train", "--backend", "replay", "--replay-dir",
                         testsupport::fixture("replay/easy_train").string(), "--run-dir",
                         run_dir, "--parallelism", "3"}) == cli::kExitOk);
        REQUIRE(run_cli({"evaluate", run_dir}) == cli::kExitOk);
        REQUIRE(run_cli({"analyze", "--run-dir", run_dir, "--provider", "fallback"}) ==
                cli::kExitOk);

        cli::RunPaths paths{run_dir};
        std::string combined;
        for (const auto& file :
             {paths.predictions(), paths.eval_summary(), paths.eval_records(),
              std::filesystem::path(run_dir) / "profiles.csv",
              std::filesystem::path(run_dir) / "hamming_correlations.csv",
              std::filesystem::path(run_dir) / "similarity_correlations.csv"}) {
            combined += util::read_file(file);
            combined += '\x00';
        }
        outputs.push_back(std::move(combined));
    }
    CHECK(outputs[0] == outputs[1]);
}

TEST_CASE("authorcount trains, reports, and persists the model") {
    // corpus_mini is too small to leave 10 training rows per split; this
    // corpus has 8 problems in each author-count category.
    const std::string root = testsupport::fixture("corpus_authorcount").string();
    testsupport::TempDir out;
    REQUIRE(run_cli({"authorcount", "--root", root, "--difficulty", "easy", "--split",
                     "train", "--out", out.path().string(), "--provider", "fallback",
                     "--splits", "8", "--rounds", "20", "--seed", "3"}) == cli::kExitOk);

    auto features = util::read_file(out / "features.csv");
    CHECK(features.find("sim_hist_0") != std::string::npos);
    CHECK(features.find("flesch_reading_ease") != std::string::npos);
    // 24 problems + header
    CHECK(std::count(features.begin(), features.end(), '\n') == 25);

    auto metrics = util::read_file(out / "authorcount_metrics.csv");
    CHECK(metrics.find("c1_2") != std::string::npos);
    CHECK(metrics.find("c3_4") != std::string::npos);
    CHECK(metrics.find("c5plus") != std::string::npos);
    CHECK(metrics.find("macro") != std::string::npos);

    auto model = json::parse(util::read_file(out / "model.json"));
    CHECK(model.at("kind") == "boosted_trees_multiclass");
    CHECK(model.at("n_features") == 24);

    // deterministic: a second invocation produces identical artifacts
    testsupport::TempDir out2;
    REQUIRE(run_cli({"authorcount", "--root", root, "--difficulty", "easy", "--split",
                     "train", "--out", out2.path().string(), "--provider", "fallback",
                     "--splits", "8", "--rounds", "20", "--seed", "3"}) == cli::kExitOk);
    CHECK(util::read_file(out2 / "features.csv") == features);
    CHECK(util::read_file(out2 / "authorcount_metrics.csv") == metrics);
    CHECK(util::read_file(out2 / "model.json") == util::read_file(out / "model.json"));
}

TEST_CASE("llm backend without a credential exits with the provider code") {
    testsupport::EnvVarGuard unset("STYLEBENCH_API_KEY", nullptr);
    testsupport::TempDir tmp;
    CHECK(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split", "train",
                   "--backend", "llm:test-model", "--run-dir", (tmp / "run").string()}) ==
          cli::kExitProviderFailure);
}

TEST_CASE("replay backend requires the recording directory") {
    testsupport::TempDir tmp;
    CHECK(run_cli({"predict", "--root", mini_root(), "--difficulty", "easy", "--split", "train",
                   "--backend", "replay", "--run-dir", (tmp / "run").string()}) ==
          cli::kExitUsage);
}

TEST_CASE("config file overrides model defaults") {
    testsupport::TempDir tmp;
    auto config_path = tmp / "config.json";
    util::write_file(config_path, R"({
        "model": {"name": "custom-model", "api_key_env": "CUSTOM_KEY_VAR"},
        "defaults": {"parallelism": 2}
    })");
    auto config = cli::load_config(config_path);
    CHECK(config.model.model == "custom-model");
    CHECK(config.model.api_key_env == "CUSTOM_KEY_VAR");
    CHECK(config.parallelism == 2);
    // untouched fields keep their defaults
    CHECK(config.model.endpoint == "https://api.openai.com/v1");

    CHECK_THROWS(cli::load_config(tmp / "missing.json"));

    // no config path: library defaults
    auto defaults = cli::load_config(std::nullopt);
    CHECK(defaults.model.model == "gpt-4o-mini");
    CHECK(defaults.parallelism == 4);
}

TEST_CASE("run directory lock refuses concurrent writers") {
    testsupport::TempDir tmp;
    auto dir = tmp / "locked";
    std::filesystem::create_directories(dir);
    cli::DirLock first(dir);
    CHECK_THROWS(cli::DirLock(dir));
    // released on destruction
    {
        cli::DirLock scoped(tmp / "other");
    }
    cli::DirLock again(tmp / "other");
}

}  // TEST_SUITE
