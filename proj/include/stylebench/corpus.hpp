#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stylebench::corpus {

enum class Difficulty { easy, medium, hard };
enum class Split { train, validation, test };
enum class Granularity { sentence, paragraph };

std::string to_string(Difficulty d);
std::string to_string(Split s);
std::string to_string(Granularity g);
Difficulty difficulty_from_string(const std::string& s);
Split split_from_string(const std::string& s);
Granularity granularity_from_string(const std::string& s);

// One evaluation instance: an ordered list of text units. Units are the
// newline-delimited lines of the problem file (sentences for the 2025 data,
// paragraphs for 2024).
struct Problem {
    std::string id;
    Difficulty difficulty = Difficulty::easy;
    Split split = Split::train;
    Granularity granularity = Granularity::sentence;
    std::vector<std::string> units;

    std::size_t boundary_count() const { return units.empty() ? 0 : units.size() - 1; }
};

// Ground truth: author count plus one binary label per adjacent-unit boundary.
struct TruthAnnotation {
    std::string problem_id;
    int author_count = 1;
    std::vector<int> changes;

    int change_count() const;
};

struct Violation {
    std::string problem_id;
    std::string rule;
    std::string detail;
    std::string path;  // empty for in-memory checks

    std::string to_string() const;
};

struct Dataset {
    Difficulty difficulty = Difficulty::easy;
    Split split = Split::train;
    Granularity granularity = Granularity::sentence;
    // Sorted by numeric id (string id as tiebreak) so loading is independent
    // of directory enumeration order.
    std::vector<std::pair<Problem, TruthAnnotation>> problems;

    std::size_t size() const { return problems.size(); }
    const std::pair<Problem, TruthAnnotation>* find(const std::string& id) const;
};

class CorpusError : public std::runtime_error {
  public:
    CorpusError(std::string message, std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

struct LoadResult {
    Dataset dataset;
    std::vector<Violation> violations;  // problems rejected at load time
};

// Reads `<root>/<difficulty>/<split>/problem-<id>.txt` plus sibling
// `truth-problem-<id>.json`. Problems that violate an invariant are reported
// in `violations` and left out of the dataset; well-formed ones load.
LoadResult scan_dataset(const std::filesystem::path& root, Difficulty difficulty, Split split,
                        Granularity granularity);

// scan_dataset that throws CorpusError if anything was rejected.
Dataset load_dataset(const std::filesystem::path& root, Difficulty difficulty, Split split,
                     Granularity granularity);

// Re-checks every invariant on an in-memory dataset. Violations are data,
// not failures: the list is empty iff the dataset is clean.
std::vector<Violation> validate(const Dataset& dataset);

struct Summary {
    std::map<int, int> change_count_hist;
    std::map<int, int> author_count_hist;
    double units_min = 0, units_q1 = 0, units_median = 0, units_q3 = 0, units_max = 0;

    // CSV-ready rows under the `key,count` contract.
    std::vector<std::pair<std::string, double>> rows() const;
    std::string to_csv() const;
};

Summary summarize(const Dataset& dataset);  // throws std::invalid_argument on empty

// Linear-interpolation quantile over a sorted copy of v; q in [0,1].
double quantile(std::vector<double> v, double q);

}  // namespace stylebench::corpus
