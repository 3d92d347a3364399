#include "stylebench/authorcount.hpp"

#include "stylebench/util/parallel.hpp"
#include "stylebench/util/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stylebench::authorcount {

namespace {

struct SplitScores {
    // per class: precision, recall, f1 for one split
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_f1 = 0.0;
};

}  // namespace

CvResult cross_validate(const std::vector<FeatureRow>& rows, const CvConfig& config) {
    if (config.n_splits < 1) {
        throw std::invalid_argument("n_splits must be at least 1");
    }
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie strictly between 0 and 1");
    }

    // Class -> row indices, classes in fixed sorted order.
    std::map<Category, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        by_class[rows[i].label].push_back(i);
    }
    if (by_class.size() < 2) {
        throw std::invalid_argument("cross-validation requires at least 2 classes");
    }
    for (const auto& [category, members] : by_class) {
        if (members.size() < 2) {
            throw std::invalid_argument("class " + to_string(category) +
                                        " has fewer than 2 rows; cannot stratify");
        }
    }
    std::vector<Category> classes;
    for (const auto& [category, members] : by_class) {
        classes.push_back(category);
    }
    const std::size_t k = classes.size();

    std::vector<SplitScores> splits(static_cast<std::size_t>(config.n_splits));
    const auto workers = static_cast<std::size_t>(std::max(1, config.parallelism));

    util::parallel_for(splits.size(), workers, [&](std::size_t s) {
        // Split membership depends only on the master seed and split index,
        // never on scheduling, so parallel and serial runs agree exactly.
        util::Rng rng(util::derive_seed(config.seed, "split:" + std::to_string(s)));

        std::vector<FeatureRow> train_rows;
        std::vector<const FeatureRow*> test_rows;
        for (Category category : classes) {
            std::vector<std::size_t> members = by_class.at(category);
            rng.shuffle(members);
            auto want = static_cast<std::size_t>(std::llround(
                config.test_fraction * static_cast<double>(members.size())));
            const std::size_t test_count =
                std::clamp<std::size_t>(want, 1, members.size() - 1);
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (j < test_count) {
                    test_rows.push_back(&rows[members[j]]);
                } else {
                    train_rows.push_back(rows[members[j]]);
                }
            }
        }

        BoostedTreesModel model =
            train(train_rows, config.params,
                  util::derive_seed(config.seed, "train:" + std::to_string(s)));

        std::vector<std::size_t> tp(k, 0);
        std::vector<std::size_t> fp(k, 0);
        std::vector<std::size_t> fn(k, 0);
        auto class_index = [&](Category c) {
            return static_cast<std::size_t>(
                std::lower_bound(classes.begin(), classes.end(), c) - classes.begin());
        };
        for (const FeatureRow* row : test_rows) {
            Category predicted = predict(model, *row).category;
            const std::size_t truth = class_index(row->label);
            const std::size_t guess = class_index(predicted);
            if (guess == truth) {
                ++tp[truth];
            } else {
                ++fp[guess];
                ++fn[truth];
            }
        }

        SplitScores& out = splits[s];
        out.precision.resize(k);
        out.recall.resize(k);
        out.f1.resize(k);
        for (std::size_t c = 0; c < k; ++c) {
            const double denom_p = static_cast<double>(tp[c] + fp[c]);
            const double denom_r = static_cast<double>(tp[c] + fn[c]);
            const double p = denom_p > 0 ? static_cast<double>(tp[c]) / denom_p : 0.0;
            const double r = denom_r > 0 ? static_cast<double>(tp[c]) / denom_r : 0.0;
            out.precision[c] = p;
            out.recall[c] = r;
            out.f1[c] = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
            out.macro_f1 += out.f1[c] / static_cast<double>(k);
        }
    });

    CvResult result;
    result.n_splits = config.n_splits;
    result.test_fraction = config.test_fraction;
    result.per_class.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        ClassMetrics& m = result.per_class[c];
        m.category = classes[c];
        m.support = by_class.at(classes[c]).size();
        for (const auto& split : splits) {
            m.precision_mean += split.precision[c];
            m.recall_mean += split.recall[c];
            m.f1_mean += split.f1[c];
        }
        m.precision_mean /= static_cast<double>(splits.size());
        m.recall_mean /= static_cast<double>(splits.size());
        m.f1_mean /= static_cast<double>(splits.size());
    }
    for (const auto& split : splits) {
        result.split_macro_f1.push_back(split.macro_f1);
        result.macro_f1_mean += split.macro_f1;
    }
    result.macro_f1_mean /= static_cast<double>(splits.size());
    return result;
}

}  // namespace stylebench::authorcount
