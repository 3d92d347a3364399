#include "stylebench/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "stylebench/util/jsonl.hpp"
#include "stylebench/util/tabular.hpp"
#include "stylebench/util/text.hpp"

namespace stylebench::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Difficulty d) {
    switch (d) {
        case Difficulty::easy: return "easy";
        case Difficulty::medium: return "medium";
        case Difficulty::hard: return "hard";
    }
    return "?";
}

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "?";
}

std::string to_string(Granularity g) {
    return g == Granularity::sentence ? "sentence" : "paragraph";
}

Difficulty difficulty_from_string(const std::string& s) {
    if (s == "easy") return Difficulty::easy;
    if (s == "medium") return Difficulty::medium;
    if (s == "hard") return Difficulty::hard;
    throw std::invalid_argument("unknown difficulty: " + s);
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "validation") return Split::validation;
    if (s == "test") return Split::test;
    throw std::invalid_argument("unknown split: " + s);
}

Granularity granularity_from_string(const std::string& s) {
    if (s == "sentence") return Granularity::sentence;
    if (s == "paragraph") return Granularity::paragraph;
    throw std::invalid_argument("unknown granularity: " + s);
}

int TruthAnnotation::change_count() const {
    return std::accumulate(changes.begin(), changes.end(), 0);
}

std::string Violation::to_string() const {
    std::string out;
    if (!path.empty()) out += path + ": ";
    if (!problem_id.empty()) out += "problem " + problem_id + ": ";
    out += rule;
    if (!detail.empty()) out += " (" + detail + ")";
    return out;
}

const std::pair<Problem, TruthAnnotation>* Dataset::find(const std::string& id) const {
    for (const auto& p : problems)
        if (p.first.id == id) return &p;
    return nullptr;
}

CorpusError::CorpusError(std::string message, std::vector<Violation> violations)
    : std::runtime_error(std::move(message)), violations_(std::move(violations)) {}

namespace {

// Invariant checks shared by the loader and validate(). `path` is empty for
// in-memory datasets.
void check_pair(const Problem& problem, const TruthAnnotation& truth, const std::string& path,
                std::vector<Violation>& out) {
    if (problem.units.size() < 2)
        out.push_back({problem.id, "too few units",
                       "need at least 2 units, got " + std::to_string(problem.units.size()), path});
    for (std::size_t i = 0; i < problem.units.size(); ++i) {
        if (problem.units[i].empty()) {
            out.push_back({problem.id, "empty unit", "unit index " + std::to_string(i), path});
            break;
        }
    }
    if (problem.units.size() >= 2 && truth.changes.size() != problem.units.size() - 1)
        out.push_back({problem.id, "changes length mismatch",
                       "expected " + std::to_string(problem.units.size() - 1) + ", got " +
                           std::to_string(truth.changes.size()),
                       path});
    for (int v : truth.changes) {
        if (v != 0 && v != 1) {
            out.push_back({problem.id, "non-binary change value", std::to_string(v), path});
            break;
        }
    }
    if (truth.author_count < 1)
        out.push_back({problem.id, "author_count below 1", std::to_string(truth.author_count), path});
    if (truth.author_count > truth.change_count() + 1)
        out.push_back({problem.id, "author_count exceeds changes+1",
                       std::to_string(truth.author_count) + " authors, " +
                           std::to_string(truth.change_count()) + " changes",
                       path});
}

// Numeric-first ordering so problem-9 sorts before problem-10.
bool id_less(const std::string& a, const std::string& b) {
    const bool na = !a.empty() && std::all_of(a.begin(), a.end(), [](unsigned char c) { return std::isdigit(c); });
    const bool nb = !b.empty() && std::all_of(b.begin(), b.end(), [](unsigned char c) { return std::isdigit(c); });
    if (na && nb) {
        // compare as integers of arbitrary length: shorter digit string first
        std::string sa = a, sb = b;
        sa.erase(0, sa.find_first_not_of('0'));
        sb.erase(0, sb.find_first_not_of('0'));
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
        return a < b;  // zero-padding tiebreak
    }
    if (na != nb) return na;
    return a < b;
}

}  // namespace

LoadResult scan_dataset(const fs::path& root, Difficulty difficulty, Split split,
                        Granularity granularity) {
    LoadResult result;
    result.dataset.difficulty = difficulty;
    result.dataset.split = split;
    result.dataset.granularity = granularity;

    const fs::path dir = root / to_string(difficulty) / to_string(split);
    if (!fs::is_directory(dir))
        throw CorpusError("dataset directory not found: " + dir.string(), {});

    std::vector<std::pair<std::string, fs::path>> files;  // (id, problem file)
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        constexpr std::string_view prefix = "problem-";
        constexpr std::string_view suffix = ".txt";
        if (name.size() > prefix.size() + suffix.size() && name.starts_with(prefix) &&
            name.ends_with(suffix)) {
            files.emplace_back(name.substr(prefix.size(), name.size() - prefix.size() - suffix.size()),
                               entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return id_less(a.first, b.first); });

    std::set<std::string> seen;
    for (const auto& [id, problem_path] : files) {
        if (!seen.insert(id).second) {
            result.violations.push_back({id, "duplicate id", "", problem_path.string()});
            continue;
        }
        std::vector<Violation> local;

        Problem problem;
        problem.id = id;
        problem.difficulty = difficulty;
        problem.split = split;
        problem.granularity = granularity;

        std::string text;
        try {
            text = util::read_file(problem_path);
        } catch (const std::exception& e) {
            result.violations.push_back({id, "unreadable problem file", e.what(), problem_path.string()});
            continue;
        }
        if (!util::is_valid_utf8(text)) {
            result.violations.push_back({id, "invalid UTF-8", "", problem_path.string()});
            continue;
        }
        {
            // Keep interior empty lines so they surface as "empty unit"
            // violations; only trailing blank lines are ignored.
            auto lines = util::split_lines(text);
            while (!lines.empty() && lines.back().empty()) lines.pop_back();
            problem.units = std::move(lines);
        }

        const fs::path truth_path = problem_path.parent_path() / ("truth-problem-" + id + ".json");
        TruthAnnotation truth;
        truth.problem_id = id;
        if (!fs::exists(truth_path)) {
            result.violations.push_back({id, "missing truth file", "", truth_path.string()});
            continue;
        }
        try {
            const json doc = json::parse(util::read_file(truth_path));
            if (!doc.contains("authors") || !doc["authors"].is_number_integer())
                throw std::runtime_error("missing integer key 'authors'");
            if (!doc.contains("changes") || !doc["changes"].is_array())
                throw std::runtime_error("missing array key 'changes'");
            truth.author_count = doc["authors"].get<int>();
            for (const auto& v : doc["changes"]) {
                if (!v.is_number_integer())
                    throw std::runtime_error("non-integer change value");
                truth.changes.push_back(v.get<int>());
            }
        } catch (const std::exception& e) {
            result.violations.push_back({id, "malformed truth file", e.what(), truth_path.string()});
            continue;
        }

        check_pair(problem, truth, problem_path.string(), local);
        if (!local.empty()) {
            result.violations.insert(result.violations.end(), local.begin(), local.end());
            continue;
        }
        result.dataset.problems.emplace_back(std::move(problem), std::move(truth));
    }
    return result;
}

Dataset load_dataset(const fs::path& root, Difficulty difficulty, Split split,
                     Granularity granularity) {
    LoadResult result = scan_dataset(root, difficulty, split, granularity);
    if (!result.violations.empty()) {
        std::ostringstream msg;
        msg << result.violations.size() << " invalid problem(s) under " << root.string() << ":";
        for (const auto& v : result.violations) msg << "\n  " << v.to_string();
        throw CorpusError(msg.str(), std::move(result.violations));
    }
    return std::move(result.dataset);
}

std::vector<Violation> validate(const Dataset& dataset) {
    std::vector<Violation> out;
    std::set<std::string> seen;
    for (const auto& [problem, truth] : dataset.problems) {
        if (!seen.insert(problem.id).second)
            out.push_back({problem.id, "duplicate id", "", ""});
        if (truth.problem_id != problem.id)
            out.push_back({problem.id, "truth id mismatch", truth.problem_id, ""});
        check_pair(problem, truth, "", out);
    }
    return out;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of empty vector");
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

Summary summarize(const Dataset& dataset) {
    if (dataset.problems.empty()) throw std::invalid_argument("summarize: empty dataset");
    Summary s;
    std::vector<double> unit_counts;
    unit_counts.reserve(dataset.problems.size());
    for (const auto& [problem, truth] : dataset.problems) {
        s.change_count_hist[truth.change_count()] += 1;
        s.author_count_hist[truth.author_count] += 1;
        unit_counts.push_back(static_cast<double>(problem.units.size()));
    }
    s.units_min = quantile(unit_counts, 0.0);
    s.units_q1 = quantile(unit_counts, 0.25);
    s.units_median = quantile(unit_counts, 0.5);
    s.units_q3 = quantile(unit_counts, 0.75);
    s.units_max = quantile(unit_counts, 1.0);
    return s;
}

std::vector<std::pair<std::string, double>> Summary::rows() const {
    std::vector<std::pair<std::string, double>> out;
    out.emplace_back("schema_version", 1);
    for (const auto& [k, v] : change_count_hist)
        out.emplace_back("change_count:" + std::to_string(k), v);
    for (const auto& [k, v] : author_count_hist)
        out.emplace_back("author_count:" + std::to_string(k), v);
    out.emplace_back("unit_count_min", units_min);
    out.emplace_back("unit_count_q1", units_q1);
    out.emplace_back("unit_count_median", units_median);
    out.emplace_back("unit_count_q3", units_q3);
    out.emplace_back("unit_count_max", units_max);
    return out;
}

std::string Summary::to_csv() const {
    util::CsvWriter csv;
    csv.header({"key", "count"});
    for (const auto& [k, v] : rows()) csv.row({k, util::format_g(v)});
    return csv.str();
}

}  // namespace stylebench::corpus
