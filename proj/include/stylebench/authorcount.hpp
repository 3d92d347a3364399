#pragma once

#include "stylebench/corpus.hpp"
#include "stylebench/semantics.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace stylebench::authorcount {

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

enum class Category { c1_2 = 0, c3_4 = 1, c5plus = 2 };

std::string to_string(Category c);
Category category_from_string(const std::string& s);

// Bucket an author count (or, with the alternate labeling, a change count)
// into the three categories: <=2, 3-4, >=5.
Category categorize(int count);

enum class LabelSource { authors, changes };

// Aggregate readability statistics over a problem's units, treating each unit
// as one sentence. Word and syllable counting use a simple deterministic
// heuristic (whitespace tokens; vowel-group syllables with silent-e
// subtraction, minimum one per word).
struct Readability {
    double flesch_reading_ease = 0.0;
    double flesch_kincaid_grade = 0.0;
    double avg_words_per_unit = 0.0;
    double avg_syllables_per_word = 0.0;
    double type_token_ratio = 0.0;
    double punctuation_density = 0.0;
};

int count_syllables(const std::string& word);
Readability readability(const std::vector<std::string>& units);

struct FeatureRow {
    std::string problem_id;
    std::vector<double> features;  // layout given by feature_names()
    Category label = Category::c1_2;
};

// Fixed feature layout: 10 histogram bins of adjacent similarities over
// [-1,1], then mean/std/min/max/median/q1/q3 of those similarities, then the
// six readability features, then the unit count. 24 columns total.
const std::vector<std::string>& feature_names();
inline constexpr std::size_t kHistogramBins = 10;

FeatureRow extract_features(const corpus::Problem& problem,
                            const semantics::SimilarityProfile& profile,
                            const corpus::TruthAnnotation& truth,
                            LabelSource label_source = LabelSource::authors);

// ---------------------------------------------------------------------------
// Gradient-boosted trees (multiclass, softmax objective)
// ---------------------------------------------------------------------------

struct TrainParams {
    int max_depth = 4;
    double learning_rate = 0.1;
    int rounds = 200;
    double l2_reg = 1.0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf score contribution (learning rate folded in)
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double score(const std::vector<double>& features) const;
};

struct BoostedTreesModel {
    std::vector<Category> classes;  // sorted ascending; >= 2 entries
    std::size_t n_features = 0;
    TrainParams params;
    std::uint64_t seed = 0;
    // trees[round][class_index]
    std::vector<std::vector<Tree>> trees;
    // Multiclass cross-entropy on the training set before each round's trees
    // were added, plus one final value; non-increasing by construction.
    std::vector<double> train_loss;
};

nlohmann::json to_json(const BoostedTreesModel& model);
BoostedTreesModel model_from_json(const nlohmann::json& doc);

// Fits one regression tree per class per round to the softmax cross-entropy
// gradients (exact greedy splits, second-order leaf weights). Deterministic
// given rows and seed. Requires >= 10 rows spanning >= 2 classes.
BoostedTreesModel train(const std::vector<FeatureRow>& rows, const TrainParams& params,
                        std::uint64_t seed);

struct Scored {
    Category category = Category::c1_2;
    std::vector<double> probabilities;  // aligned with model.classes, sums to 1
};

// Softmax over summed leaf scores; ties broken toward the lowest class.
Scored predict(const BoostedTreesModel& model, const FeatureRow& row);

// ---------------------------------------------------------------------------
// Stratified shuffle-split evaluation
// ---------------------------------------------------------------------------

struct ClassMetrics {
    Category category = Category::c1_2;
    double precision_mean = 0.0;
    double recall_mean = 0.0;
    double f1_mean = 0.0;
    std::size_t support = 0;  // rows of this class in the full dataset
};

struct CvConfig {
    int n_splits = 100;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    int parallelism = 4;
    TrainParams params;
};

struct CvResult {
    std::vector<ClassMetrics> per_class;
    double macro_f1_mean = 0.0;
    std::vector<double> split_macro_f1;  // one value per split
    int n_splits = 0;
    double test_fraction = 0.0;
};

// Repeated stratified shuffle splits: each split holds out test_fraction of
// every class (at least one row, never a whole class), trains on the rest,
// and scores the holdout. Split membership derives from the seed alone, so
// results are identical regardless of parallelism. Requires every class to
// have at least 2 rows.
CvResult cross_validate(const std::vector<FeatureRow>& rows, const CvConfig& config);

}  // namespace stylebench::authorcount
