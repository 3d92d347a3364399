#include "stylebench/authorcount.hpp"

#include "stylebench/util/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace stylebench::authorcount {

std::string to_string(Category c) {
    switch (c) {
        case Category::c1_2: return "c1_2";
        case Category::c3_4: return "c3_4";
        case Category::c5plus: return "c5plus";
    }
    return "unknown";
}

Category category_from_string(const std::string& s) {
    if (s == "c1_2") return Category::c1_2;
    if (s == "c3_4") return Category::c3_4;
    if (s == "c5plus") return Category::c5plus;
    throw std::invalid_argument("unknown category: " + s);
}

Category categorize(int count) {
    if (count <= 2) return Category::c1_2;
    if (count <= 4) return Category::c3_4;
    return Category::c5plus;
}

int count_syllables(const std::string& word) {
    std::string letters;
    for (char c : word) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            letters += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (letters.empty()) {
        return 1;
    }
    auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int groups = 0;
    bool in_group = false;
    for (char c : letters) {
        if (is_vowel(c)) {
            if (!in_group) {
                ++groups;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }
    // Silent final 'e' ("cake", "store") does not add a syllable.
    if (letters.size() >= 2 && letters.back() == 'e' && !is_vowel(letters[letters.size() - 2]) &&
        groups > 1) {
        --groups;
    }
    return std::max(1, groups);
}

Readability readability(const std::vector<std::string>& units) {
    if (units.empty()) {
        throw std::invalid_argument("readability requires at least one unit");
    }
    std::size_t total_words = 0;
    std::size_t total_syllables = 0;
    std::size_t total_chars = 0;
    std::size_t punct_chars = 0;
    std::set<std::string> types;

    for (const auto& unit : units) {
        for (char c : unit) {
            ++total_chars;
            if (std::ispunct(static_cast<unsigned char>(c))) {
                ++punct_chars;
            }
        }
        for (const auto& token : util::words(unit)) {
            ++total_words;
            total_syllables += static_cast<std::size_t>(count_syllables(token));
            types.insert(token);
        }
    }

    Readability r;
    const double s = static_cast<double>(units.size());
    const double w = static_cast<double>(std::max<std::size_t>(1, total_words));
    const double syl = static_cast<double>(total_syllables);
    r.avg_words_per_unit = static_cast<double>(total_words) / s;
    r.avg_syllables_per_word = syl / w;
    r.flesch_reading_ease = 206.835 - 1.015 * (w / s) - 84.6 * (syl / w);
    r.flesch_kincaid_grade = 0.39 * (w / s) + 11.8 * (syl / w) - 15.59;
    r.type_token_ratio = static_cast<double>(types.size()) / w;
    r.punctuation_density =
        total_chars == 0 ? 0.0
                         : static_cast<double>(punct_chars) / static_cast<double>(total_chars);
    return r;
}

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (std::size_t b = 0; b < kHistogramBins; ++b) {
            n.push_back("sim_hist_" + std::to_string(b));
        }
        for (const char* stat : {"sim_mean", "sim_std", "sim_min", "sim_max", "sim_median",
                                 "sim_q1", "sim_q3"}) {
            n.push_back(stat);
        }
        for (const char* feat :
             {"flesch_reading_ease", "flesch_kincaid_grade", "avg_words_per_unit",
              "avg_syllables_per_word", "type_token_ratio", "punctuation_density"}) {
            n.push_back(feat);
        }
        n.push_back("num_units");
        return n;
    }();
    return names;
}

FeatureRow extract_features(const corpus::Problem& problem,
                            const semantics::SimilarityProfile& profile,
                            const corpus::TruthAnnotation& truth, LabelSource label_source) {
    if (profile.problem_id != problem.id) {
        throw std::invalid_argument("profile does not belong to problem " + problem.id);
    }
    const std::vector<double>& sims = profile.adjacent_sims;
    if (sims.empty()) {
        throw std::invalid_argument("profile has no adjacent similarities (problem " +
                                    problem.id + ")");
    }

    FeatureRow row;
    row.problem_id = problem.id;
    row.features.reserve(feature_names().size());

    // Histogram over [-1,1] with equal-width bins; 1.0 lands in the top bin.
    std::vector<double> hist(kHistogramBins, 0.0);
    const double width = 2.0 / static_cast<double>(kHistogramBins);
    for (double s : sims) {
        auto bin = static_cast<std::size_t>(std::clamp(
            std::floor((s + 1.0) / width), 0.0, static_cast<double>(kHistogramBins - 1)));
        hist[bin] += 1.0;
    }
    row.features.insert(row.features.end(), hist.begin(), hist.end());

    double mean = 0.0;
    for (double s : sims) {
        mean += s;
    }
    mean /= static_cast<double>(sims.size());
    double var = 0.0;
    for (double s : sims) {
        var += (s - mean) * (s - mean);
    }
    var /= static_cast<double>(sims.size());
    row.features.push_back(mean);
    row.features.push_back(std::sqrt(var));
    row.features.push_back(*std::min_element(sims.begin(), sims.end()));
    row.features.push_back(*std::max_element(sims.begin(), sims.end()));
    row.features.push_back(corpus::quantile(sims, 0.5));
    row.features.push_back(corpus::quantile(sims, 0.25));
    row.features.push_back(corpus::quantile(sims, 0.75));

    Readability r = readability(problem.units);
    row.features.push_back(r.flesch_reading_ease);
    row.features.push_back(r.flesch_kincaid_grade);
    row.features.push_back(r.avg_words_per_unit);
    row.features.push_back(r.avg_syllables_per_word);
    row.features.push_back(r.type_token_ratio);
    row.features.push_back(r.punctuation_density);

    row.features.push_back(static_cast<double>(problem.units.size()));

    row.label = categorize(label_source == LabelSource::authors ? truth.author_count
                                                                : truth.change_count());
    for (double f : row.features) {
        if (!std::isfinite(f)) {
            throw std::runtime_error("non-finite feature extracted for problem " + problem.id);
        }
    }
    return row;
}

}  // namespace stylebench::authorcount
