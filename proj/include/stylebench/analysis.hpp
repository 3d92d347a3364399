#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stylebench/evaluation.hpp"

namespace stylebench::analysis {

// Pearson, Spearman (average ranks), and Kendall tau-b with two-sided
// p-values (t approximation for the first two, tie-corrected normal
// approximation for tau-b).
struct CorrelationTriple {
    double pearson_r = 0.0;
    double spearman_rho = 0.0;
    double kendall_tau = 0.0;
    double p_pearson = 1.0;
    double p_spearman = 1.0;
    double p_kendall = 1.0;
    std::size_t n = 0;

    bool significant(double alpha = 0.05) const {
        return p_pearson < alpha && p_spearman < alpha && p_kendall < alpha;
    }
};

// Throws std::invalid_argument on length mismatch, n < 3, or a constant
// input (correlation undefined).
CorrelationTriple correlations(const std::vector<double>& x, const std::vector<double>& y);

// Average ranks (ties get the mean of the ranks they span), 1-based.
std::vector<double> average_ranks(const std::vector<double>& v);

struct FeatureCorrelation {
    std::string feature;
    std::optional<CorrelationTriple> corr;  // empty when undefined
    std::string note;                       // reason when undefined
};

// Correlates each problem-level parameter against normalized Hamming
// distance. The unit-count column is labeled by granularity
// ("num_sentences" / "num_paragraphs"). A constant column is reported as
// undefined rather than aborting the table.
std::vector<FeatureCorrelation> hamming_feature_table(
    const std::vector<evaluation::EvalRecord>& records, const std::string& units_feature_name);

// Correlation of adjacent-pair similarity against binary switch labels
// pooled over a dataset (Pearson reduces to point-biserial). Negative values
// mean lower similarity goes with more predicted switches. Throws when all
// labels are identical.
CorrelationTriple similarity_switch_corr(const std::vector<double>& adjacent_sims,
                                         const std::vector<int>& labels);

enum class LabelSource { predicted, truth };

struct SwitchCorrelationRow {
    LabelSource source = LabelSource::predicted;
    std::optional<CorrelationTriple> corr;
    std::string note;
    std::size_t n = 0;
};

// One row for predicted labels and one for truth labels over the same pooled
// similarity series.
std::vector<SwitchCorrelationRow> switch_correlation_table(const std::vector<double>& sims,
                                                           const std::vector<int>& predicted,
                                                           const std::vector<int>& truth);

}  // namespace stylebench::analysis
