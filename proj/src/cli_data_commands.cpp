#include "cli_internal.hpp"

#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/tabular.hpp"

#include <iostream>

namespace stylebench::cli {

int cmd_validate(const ValidateArgs& args) {
    if (!std::filesystem::exists(args.coords.root)) {
        std::cerr << "error: corpus root does not exist: " << args.coords.root.string() << "\n";
        return kExitDataFailure;
    }
    corpus::LoadResult result =
        corpus::scan_dataset(args.coords.root, args.coords.difficulty, args.coords.split,
                             args.coords.granularity);
    for (const auto& violation : result.violations) {
        std::cout << violation.to_string() << "\n";
    }
    std::cout << args.coords.label() << ": " << result.dataset.size() << " problems loaded, "
              << result.violations.size() << " violations\n";
    if (result.dataset.size() == 0 && result.violations.empty()) {
        std::cerr << "error: no problems found under " << args.coords.root.string() << "/"
                  << args.coords.label() << "\n";
        return kExitDataFailure;
    }
    return result.violations.empty() ? kExitOk : kExitDataFailure;
}

int cmd_explore(const ExploreArgs& args) {
    corpus::Dataset dataset = load_coords(args.coords);
    corpus::Summary summary = corpus::summarize(dataset);

    std::filesystem::create_directories(args.out);
    auto csv_path = args.out / "dataset_summary.csv";
    util::write_file(csv_path, summary.to_csv());

    std::cout << args.coords.label() << ": " << dataset.size() << " problems\n";
    std::cout << "units per problem: min " << summary.units_min << ", q1 " << summary.units_q1
              << ", median " << summary.units_median << ", q3 " << summary.units_q3 << ", max "
              << summary.units_max << "\n";
    std::cout << "change-count histogram:";
    for (const auto& [changes, count] : summary.change_count_hist) {
        std::cout << " " << changes << ":" << count;
    }
    std::cout << "\nauthor-count histogram:";
    for (const auto& [authors, count] : summary.author_count_hist) {
        std::cout << " " << authors << ":" << count;
    }
    std::cout << "\nwrote " << csv_path.string() << "\n";
    return kExitOk;
}

}  // namespace stylebench::cli
