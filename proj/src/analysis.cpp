#include "stylebench/analysis.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stylebench::analysis {

namespace {

double pearson_impl(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("correlations: constant input, correlation undefined");
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

// Two-sided p from the t statistic r*sqrt((n-2)/(1-r^2)).
double p_from_t(double r, std::size_t n) {
    if (std::abs(r) >= 1.0 - 1e-15) return 0.0;
    const double dof = static_cast<double>(n - 2);
    const double t = r * std::sqrt(dof / ((1.0 - r) * (1.0 + r)));
    boost::math::students_t_distribution<double> dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

struct TieStats {
    double pairs = 0;   // sum t(t-1)/2
    double v0 = 0;      // sum t(t-1)(t-2)
    double v1 = 0;      // sum t(t-1)(2t+5)
};

template <typename GroupSize>
void add_tie_group(TieStats& s, GroupSize t_) {
    const double t = static_cast<double>(t_);
    if (t < 2) return;
    s.pairs += t * (t - 1) / 2.0;
    s.v0 += t * (t - 1) * (t - 2);
    s.v1 += t * (t - 1) * (2 * t + 5);
}

// Merge sort over y counting strict inversions (#discordant pairs among the
// x-sorted order). Stable, so y-ties never count.
double count_inversions(std::vector<double>& y, std::vector<double>& scratch, std::size_t lo,
                        std::size_t hi) {
    if (hi - lo < 2) return 0.0;
    const std::size_t mid = lo + (hi - lo) / 2;
    double inv = count_inversions(y, scratch, lo, mid) + count_inversions(y, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (y[j] < y[i]) {
            inv += static_cast<double>(mid - i);
            scratch[k++] = y[j++];
        } else {
            scratch[k++] = y[i++];
        }
    }
    while (i < mid) scratch[k++] = y[i++];
    while (j < hi) scratch[k++] = y[j++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              y.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

struct KendallResult {
    double tau = 0.0;
    double p = 1.0;
};

// Knight's O(n log n) tau-b with the tie-corrected normal approximation for
// the p-value.
KendallResult kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    TieStats xt, yt;
    double joint_pairs = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        add_tie_group(xt, j - i);
        for (std::size_t a = i; a < j;) {
            std::size_t b = a;
            while (b < j && y[order[b]] == y[order[a]]) ++b;
            const double u = static_cast<double>(b - a);
            joint_pairs += u * (u - 1) / 2.0;
            a = b;
        }
        i = j;
    }

    std::vector<double> ys(n), scratch(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    const double dis = count_inversions(ys, scratch, 0, n);

    // ys is now sorted; walk its tie groups.
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && ys[j] == ys[i]) ++j;
        add_tie_group(yt, j - i);
        i = j;
    }

    const double nd = static_cast<double>(n);
    const double tot = nd * (nd - 1) / 2.0;
    const double denom_x = tot - xt.pairs;
    const double denom_y = tot - yt.pairs;
    if (denom_x <= 0.0 || denom_y <= 0.0)
        throw std::invalid_argument("correlations: constant input, correlation undefined");

    const double con_minus_dis = tot - xt.pairs - yt.pairs + joint_pairs - 2.0 * dis;
    KendallResult r;
    r.tau = std::clamp(con_minus_dis / (std::sqrt(denom_x) * std::sqrt(denom_y)), -1.0, 1.0);

    const double m = nd * (nd - 1);
    const double var = (m * (2 * nd + 5) - xt.v1 - yt.v1) / 18.0 +
                       (2.0 * xt.pairs * yt.pairs) / m + xt.v0 * yt.v0 / (9.0 * m * (nd - 2));
    if (var <= 0.0) {
        r.p = 1.0;
    } else {
        const double z = con_minus_dis / std::sqrt(var);
        r.p = std::erfc(std::abs(z) / std::sqrt(2.0));
    }
    return r;
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && v[order[j]] == v[order[i]]) ++j;
        // 1-based average of ranks i+1 .. j
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

CorrelationTriple correlations(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("correlations: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("correlations: need at least 3 samples");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("correlations: non-finite value in x");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("correlations: non-finite value in y");

    CorrelationTriple out;
    out.n = x.size();
    out.pearson_r = pearson_impl(x, y);
    out.p_pearson = p_from_t(out.pearson_r, out.n);

    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    out.spearman_rho = pearson_impl(rx, ry);
    out.p_spearman = p_from_t(out.spearman_rho, out.n);

    const auto kt = kendall_tau_b(x, y);
    out.kendall_tau = kt.tau;
    out.p_kendall = kt.p;
    return out;
}

std::vector<FeatureCorrelation> hamming_feature_table(
    const std::vector<evaluation::EvalRecord>& records, const std::string& units_feature_name) {
    if (records.size() < 3)
        throw std::invalid_argument("hamming_feature_table: need at least 3 records");

    std::vector<double> hamming;
    hamming.reserve(records.size());
    for (const auto& r : records) hamming.push_back(r.hamming_norm);

    const std::vector<std::pair<std::string, std::vector<double>>> features = [&] {
        std::vector<double> a, c, cp, u;
        for (const auto& r : records) {
            a.push_back(r.num_authors);
            c.push_back(r.num_changes);
            cp.push_back(r.num_changes_pred);
            u.push_back(r.num_units);
        }
        return std::vector<std::pair<std::string, std::vector<double>>>{
            {"num_authors", std::move(a)},
            {"num_changes", std::move(c)},
            {"num_changes_pred", std::move(cp)},
            {units_feature_name, std::move(u)},
        };
    }();

    std::vector<FeatureCorrelation> table;
    for (const auto& [name, xs] : features) {
        FeatureCorrelation fc;
        fc.feature = name;
        try {
            fc.corr = correlations(xs, hamming);
        } catch (const std::invalid_argument& e) {
            fc.note = e.what();
        }
        table.push_back(std::move(fc));
    }
    return table;
}

CorrelationTriple similarity_switch_corr(const std::vector<double>& adjacent_sims,
                                         const std::vector<int>& labels) {
    if (adjacent_sims.size() != labels.size())
        throw std::invalid_argument("similarity_switch_corr: length mismatch");
    std::vector<double> y;
    y.reserve(labels.size());
    for (int l : labels) {
        if (l != 0 && l != 1)
            throw std::invalid_argument("similarity_switch_corr: non-binary label");
        y.push_back(static_cast<double>(l));
    }
    return correlations(adjacent_sims, y);
}

std::vector<SwitchCorrelationRow> switch_correlation_table(const std::vector<double>& sims,
                                                           const std::vector<int>& predicted,
                                                           const std::vector<int>& truth) {
    std::vector<SwitchCorrelationRow> rows;
    const auto make = [&](LabelSource src, const std::vector<int>& labels) {
        SwitchCorrelationRow row;
        row.source = src;
        row.n = labels.size();
        try {
            row.corr = similarity_switch_corr(sims, labels);
        } catch (const std::invalid_argument& e) {
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    };
    make(LabelSource::predicted, predicted);
    make(LabelSource::truth, truth);
    return rows;
}

}  // namespace stylebench::analysis
