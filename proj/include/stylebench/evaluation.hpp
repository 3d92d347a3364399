#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stylebench/corpus.hpp"
#include "stylebench/predictors.hpp"

namespace stylebench::evaluation {

// Pooled per-class scores from a single confusion matrix over all boundary
// labels. A class with a zero denominator gets precision/recall/F1 of 0.
struct ClassStats {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long support = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MacroF1Result {
    double macro_f1 = 0.0;
    ClassStats change;     // class 1
    ClassStats no_change;  // class 0
    long total_boundaries = 0;
};

using LabelPair = std::pair<std::vector<int>, std::vector<int>>;  // (truth, prediction)

// Boundary labels pooled across all pairs (micro over problems, macro over
// the two classes), matching PAN's official scoring. Throws on empty input
// or any length mismatch.
MacroF1Result macro_f1(const std::vector<LabelPair>& pairs);

enum class HammingDenominator {
    boundaries,  // labels.size() == units - 1; makes 1.0 reachable (default)
    units        // the literal "total number of sentences" variant
};

// Fraction of boundary positions where the vectors disagree; 0 is a perfect
// match. Throws on length mismatch or empty vectors.
double hamming_norm(const std::vector<int>& truth, const std::vector<int>& prediction,
                    HammingDenominator denom = HammingDenominator::boundaries);

struct EvalRecord {
    std::string problem_id;
    double hamming_norm = 0.0;
    int num_authors = 0;
    int num_changes = 0;       // truth ones
    int num_changes_pred = 0;  // prediction ones
    int num_units = 0;
};

struct EvalReport {
    std::string backend_id;
    corpus::Difficulty difficulty = corpus::Difficulty::easy;
    corpus::Split split = corpus::Split::train;
    corpus::Granularity granularity = corpus::Granularity::sentence;
    MacroF1Result pooled;
    double per_problem_macro_f1_mean = 0.0;  // secondary column; pooling is the headline
    double hamming_mean = 0.0;
    std::vector<EvalRecord> records;          // stable order by dataset id order
    std::vector<std::string> missing;         // dataset problems with no prediction
    long failed = 0;                          // predictions supplied as failures
};

// Scores predictions against the dataset truth. Predictions with empty
// change vectors are counted as failures; dataset problems without any
// prediction are listed in `missing`. A prediction whose id is not in the
// dataset is an error.
EvalReport evaluate_run(const corpus::Dataset& dataset,
                        const std::vector<predictors::Prediction>& predictions,
                        const std::string& backend_id,
                        HammingDenominator denom = HammingDenominator::boundaries);

// Mean and standard deviation of pooled macro-F1 for the random-k baseline
// over `n_seeds` consecutive seeds starting at base_seed (per-problem seeds
// derived from the sweep seed and the problem id).
struct RandomBaselineStats {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> per_seed;
};
RandomBaselineStats random_baseline_sweep(const corpus::Dataset& dataset, std::size_t k,
                                          int n_seeds, std::uint64_t base_seed);

}  // namespace stylebench::evaluation
