#include "stylebench/evaluation.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "stylebench/util/rng.hpp"

namespace stylebench::evaluation {

namespace {

void fill_stats(ClassStats& s) {
    s.precision = (s.tp + s.fp) > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp) : 0.0;
    s.recall = (s.tp + s.fn) > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                                          : 0.0;
}

void check_binary(const std::vector<int>& v, const char* what) {
    for (int x : v)
        if (x != 0 && x != 1) throw std::invalid_argument(std::string(what) + ": non-binary label");
}

}  // namespace

MacroF1Result macro_f1(const std::vector<LabelPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("macro_f1: empty input");
    MacroF1Result r;
    for (const auto& [truth, pred] : pairs) {
        if (truth.size() != pred.size())
            throw std::invalid_argument("macro_f1: truth/prediction length mismatch");
        if (truth.empty()) throw std::invalid_argument("macro_f1: empty label vector");
        check_binary(truth, "macro_f1 truth");
        check_binary(pred, "macro_f1 prediction");
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const int t = truth[i], p = pred[i];
            r.total_boundaries += 1;
            if (t == 1) {
                r.change.support += 1;
                if (p == 1) r.change.tp += 1;
                else {
                    r.change.fn += 1;
                    r.no_change.fp += 1;
                }
            } else {
                r.no_change.support += 1;
                if (p == 0) r.no_change.tp += 1;
                else {
                    r.no_change.fn += 1;
                    r.change.fp += 1;
                }
            }
        }
    }
    fill_stats(r.change);
    fill_stats(r.no_change);
    r.macro_f1 = 0.5 * (r.change.f1 + r.no_change.f1);
    return r;
}

double hamming_norm(const std::vector<int>& truth, const std::vector<int>& prediction,
                    HammingDenominator denom) {
    if (truth.empty()) throw std::invalid_argument("hamming_norm: empty vectors");
    if (truth.size() != prediction.size())
        throw std::invalid_argument("hamming_norm: length mismatch");
    long diff = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] != prediction[i]) ++diff;
    const double d = denom == HammingDenominator::boundaries
                         ? static_cast<double>(truth.size())
                         : static_cast<double>(truth.size() + 1);
    return static_cast<double>(diff) / d;
}

EvalReport evaluate_run(const corpus::Dataset& dataset,
                        const std::vector<predictors::Prediction>& predictions,
                        const std::string& backend_id, HammingDenominator denom) {
    EvalReport report;
    report.backend_id = backend_id;
    report.difficulty = dataset.difficulty;
    report.split = dataset.split;
    report.granularity = dataset.granularity;

    std::map<std::string, const predictors::Prediction*> by_id;
    for (const auto& p : predictions) {
        if (!dataset.find(p.problem_id))
            throw std::invalid_argument("evaluate_run: prediction for unknown problem id " +
                                        p.problem_id);
        by_id[p.problem_id] = &p;
    }

    std::vector<LabelPair> pairs;
    double per_problem_sum = 0.0;
    double hamming_sum = 0.0;
    for (const auto& [problem, truth] : dataset.problems) {
        auto it = by_id.find(problem.id);
        if (it == by_id.end()) {
            report.missing.push_back(problem.id);
            continue;
        }
        const predictors::Prediction& pred = *it->second;
        if (pred.changes.empty()) {
            report.failed += 1;
            continue;
        }
        if (pred.changes.size() != problem.boundary_count())
            throw std::invalid_argument("evaluate_run: prediction length mismatch for problem " +
                                        problem.id);

        EvalRecord rec;
        rec.problem_id = problem.id;
        rec.hamming_norm = hamming_norm(truth.changes, pred.changes, denom);
        rec.num_authors = truth.author_count;
        rec.num_changes = truth.change_count();
        rec.num_changes_pred = pred.change_count();
        rec.num_units = static_cast<int>(problem.units.size());
        report.records.push_back(rec);

        hamming_sum += rec.hamming_norm;
        pairs.emplace_back(truth.changes, pred.changes);
        per_problem_sum += macro_f1({{truth.changes, pred.changes}}).macro_f1;
    }

    if (!pairs.empty()) {
        report.pooled = macro_f1(pairs);
        report.per_problem_macro_f1_mean = per_problem_sum / static_cast<double>(pairs.size());
        report.hamming_mean = hamming_sum / static_cast<double>(pairs.size());
    }
    return report;
}

RandomBaselineStats random_baseline_sweep(const corpus::Dataset& dataset, std::size_t k,
                                          int n_seeds, std::uint64_t base_seed) {
    if (n_seeds < 1) throw std::invalid_argument("random_baseline_sweep: n_seeds must be >= 1");
    RandomBaselineStats out;
    out.per_seed.reserve(static_cast<std::size_t>(n_seeds));
    for (int s = 0; s < n_seeds; ++s) {
        const std::uint64_t sweep_seed = base_seed + static_cast<std::uint64_t>(s);
        std::vector<LabelPair> pairs;
        pairs.reserve(dataset.size());
        for (const auto& [problem, truth] : dataset.problems) {
            auto pred = predictors::random_k(problem.boundary_count(), k,
                                             util::derive_seed(sweep_seed, problem.id));
            pairs.emplace_back(truth.changes, std::move(pred.changes));
        }
        out.per_seed.push_back(macro_f1(pairs).macro_f1);
    }
    double sum = 0.0;
    for (double v : out.per_seed) sum += v;
    out.mean = sum / static_cast<double>(out.per_seed.size());
    double ss = 0.0;
    for (double v : out.per_seed) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(out.per_seed.size()));
    return out;
}

}  // namespace stylebench::evaluation
