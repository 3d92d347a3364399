#include "stylebench/authorcount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace stylebench::authorcount {

double Tree::score(const std::vector<double>& features) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = features[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

// Exact greedy regression-tree fit on per-row gradients/hessians. Splits
// maximize the second-order gain; leaf values are the regularized Newton
// step with the learning rate folded in, so prediction is a plain sum.
class TreeBuilder {
  public:
    TreeBuilder(const std::vector<FeatureRow>& rows, const std::vector<double>& grad,
                const std::vector<double>& hess, const TrainParams& params)
        : rows_(rows), grad_(grad), hess_(hess), params_(params) {}

    Tree fit() {
        std::vector<std::size_t> all(rows_.size());
        std::iota(all.begin(), all.end(), 0);
        build(std::move(all), 0);
        Tree tree;
        tree.nodes = std::move(nodes_);
        return tree;
    }

  private:
    struct Split {
        double gain = 0.0;
        int feature = -1;
        double threshold = 0.0;
    };

    int build(std::vector<std::size_t> indices, int depth) {
        const int my = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        double g = 0.0;
        double h = 0.0;
        for (std::size_t i : indices) {
            g += grad_[i];
            h += hess_[i];
        }

        Split best;
        if (depth < params_.max_depth && indices.size() >= 2) {
            best = best_split(indices, g, h);
        }
        if (best.feature < 0) {
            nodes_[static_cast<std::size_t>(my)].value =
                -params_.learning_rate * g / (h + params_.l2_reg);
            return my;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t i : indices) {
            auto f = static_cast<std::size_t>(best.feature);
            (rows_[i].features[f] < best.threshold ? left : right).push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();

        const int left_id = build(std::move(left), depth + 1);
        const int right_id = build(std::move(right), depth + 1);
        TreeNode& node = nodes_[static_cast<std::size_t>(my)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left_id;
        node.right = right_id;
        return my;
    }

    Split best_split(const std::vector<std::size_t>& indices, double g_total, double h_total) {
        const double lambda = params_.l2_reg;
        const double parent = g_total * g_total / (h_total + lambda);
        const std::size_t n_features = rows_.front().features.size();

        Split best;
        std::vector<std::size_t> order = indices;
        for (std::size_t f = 0; f < n_features; ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                double xa = rows_[a].features[f];
                double xb = rows_[b].features[f];
                return xa != xb ? xa < xb : a < b;
            });
            double gl = 0.0;
            double hl = 0.0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                gl += grad_[order[k]];
                hl += hess_[order[k]];
                const double x_here = rows_[order[k]].features[f];
                const double x_next = rows_[order[k + 1]].features[f];
                if (x_here == x_next) {
                    continue;  // no threshold separates equal values
                }
                const double gr = g_total - gl;
                const double hr = h_total - hl;
                const double gain =
                    0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent);
                if (gain > best.gain + 1e-12) {
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    best.threshold = x_here + (x_next - x_here) / 2.0;
                }
            }
        }
        return best;
    }

    const std::vector<FeatureRow>& rows_;
    const std::vector<double>& grad_;
    const std::vector<double>& hess_;
    const TrainParams& params_;
    std::vector<TreeNode> nodes_;
};

// Row-major softmax over raw scores, numerically stabilized.
void softmax_rows(const std::vector<std::vector<double>>& scores,
                  std::vector<std::vector<double>>& probs) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& s = scores[i];
        auto& p = probs[i];
        double max_s = *std::max_element(s.begin(), s.end());
        double sum = 0.0;
        for (std::size_t c = 0; c < s.size(); ++c) {
            p[c] = std::exp(s[c] - max_s);
            sum += p[c];
        }
        for (double& v : p) {
            v /= sum;
        }
    }
}

}  // namespace

BoostedTreesModel train(const std::vector<FeatureRow>& rows, const TrainParams& params,
                        std::uint64_t seed) {
    if (rows.size() < 10) {
        throw std::invalid_argument("training requires at least 10 rows, got " +
                                    std::to_string(rows.size()));
    }
    const std::size_t n_features = rows.front().features.size();
    if (n_features == 0) {
        throw std::invalid_argument("training rows have no features");
    }
    for (const auto& row : rows) {
        if (row.features.size() != n_features) {
            throw std::invalid_argument("inconsistent feature dimensions across rows");
        }
    }
    std::set<Category> distinct;
    for (const auto& row : rows) {
        distinct.insert(row.label);
    }
    if (distinct.size() < 2) {
        throw std::invalid_argument("training requires at least 2 classes");
    }

    BoostedTreesModel model;
    model.classes.assign(distinct.begin(), distinct.end());
    model.n_features = n_features;
    model.params = params;
    model.seed = seed;

    const std::size_t n = rows.size();
    const std::size_t k = model.classes.size();
    std::vector<std::size_t> label_index(n);
    for (std::size_t i = 0; i < n; ++i) {
        label_index[i] = static_cast<std::size_t>(
            std::lower_bound(model.classes.begin(), model.classes.end(), rows[i].label) -
            model.classes.begin());
    }

    std::vector<std::vector<double>> scores(n, std::vector<double>(k, 0.0));
    std::vector<std::vector<double>> probs(n, std::vector<double>(k, 0.0));
    std::vector<double> grad(n);
    std::vector<double> hess(n);

    auto cross_entropy = [&]() {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            loss -= std::log(std::max(probs[i][label_index[i]], 1e-300));
        }
        return loss / static_cast<double>(n);
    };

    for (int round = 0; round < params.rounds; ++round) {
        softmax_rows(scores, probs);
        model.train_loss.push_back(cross_entropy());

        std::vector<Tree> round_trees;
        round_trees.reserve(k);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = probs[i][c];
                grad[i] = p - (label_index[i] == c ? 1.0 : 0.0);
                hess[i] = std::max(p * (1.0 - p), 1e-16);
            }
            round_trees.push_back(TreeBuilder(rows, grad, hess, params).fit());
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                scores[i][c] += round_trees[c].score(rows[i].features);
            }
        }
        model.trees.push_back(std::move(round_trees));
    }
    softmax_rows(scores, probs);
    model.train_loss.push_back(cross_entropy());
    return model;
}

Scored predict(const BoostedTreesModel& model, const FeatureRow& row) {
    if (row.features.size() != model.n_features) {
        throw std::invalid_argument("feature dimensionality mismatch: model expects " +
                                    std::to_string(model.n_features) + ", row has " +
                                    std::to_string(row.features.size()));
    }
    const std::size_t k = model.classes.size();
    std::vector<double> scores(k, 0.0);
    for (const auto& round : model.trees) {
        for (std::size_t c = 0; c < k; ++c) {
            scores[c] += round[c].score(row.features);
        }
    }
    Scored out;
    out.probabilities.resize(k);
    double max_s = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        out.probabilities[c] = std::exp(scores[c] - max_s);
        sum += out.probabilities[c];
    }
    std::size_t arg = 0;
    for (std::size_t c = 0; c < k; ++c) {
        out.probabilities[c] /= sum;
        // Strict > keeps the lowest class on ties (classes are sorted).
        if (out.probabilities[c] > out.probabilities[arg]) {
            arg = c;
        }
    }
    out.category = model.classes[arg];
    return out;
}

nlohmann::json to_json(const BoostedTreesModel& model) {
    nlohmann::json classes = nlohmann::json::array();
    for (Category c : model.classes) {
        classes.push_back(to_string(c));
    }
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& round : model.trees) {
        nlohmann::json round_doc = nlohmann::json::array();
        for (const auto& tree : round) {
            nlohmann::json nodes = nlohmann::json::array();
            for (const auto& n : tree.nodes) {
                nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
            }
            round_doc.push_back(std::move(nodes));
        }
        trees.push_back(std::move(round_doc));
    }
    return nlohmann::json{
        {"schema_version", 1},
        {"kind", "boosted_trees_multiclass"},
        {"classes", std::move(classes)},
        {"n_features", model.n_features},
        {"params",
         {{"max_depth", model.params.max_depth},
          {"learning_rate", model.params.learning_rate},
          {"rounds", model.params.rounds},
          {"l2_reg", model.params.l2_reg}}},
        {"seed", model.seed},
        {"train_loss", model.train_loss},
        {"trees", std::move(trees)},
    };
}

BoostedTreesModel model_from_json(const nlohmann::json& doc) {
    if (doc.value("kind", "") != "boosted_trees_multiclass" ||
        doc.value("schema_version", 0) != 1) {
        throw std::runtime_error("not a recognized model document");
    }
    BoostedTreesModel model;
    for (const auto& name : doc.at("classes")) {
        model.classes.push_back(category_from_string(name.get<std::string>()));
    }
    model.n_features = doc.at("n_features").get<std::size_t>();
    const auto& params = doc.at("params");
    model.params.max_depth = params.at("max_depth").get<int>();
    model.params.learning_rate = params.at("learning_rate").get<double>();
    model.params.rounds = params.at("rounds").get<int>();
    model.params.l2_reg = params.at("l2_reg").get<double>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.train_loss = doc.at("train_loss").get<std::vector<double>>();
    for (const auto& round_doc : doc.at("trees")) {
        std::vector<Tree> round;
        for (const auto& nodes_doc : round_doc) {
            Tree tree;
            for (const auto& n : nodes_doc) {
                TreeNode node;
                node.feature = n.at(0).get<int>();
                node.threshold = n.at(1).get<double>();
                node.left = n.at(2).get<int>();
                node.right = n.at(3).get<int>();
                node.value = n.at(4).get<double>();
                if (node.feature >= static_cast<int>(model.n_features)) {
                    throw std::runtime_error("model tree references an invalid feature index");
                }
                tree.nodes.push_back(node);
            }
            round.push_back(std::move(tree));
        }
        model.trees.push_back(std::move(round));
    }
    return model;
}

}  // namespace stylebench::authorcount
