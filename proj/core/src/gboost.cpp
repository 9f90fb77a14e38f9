#include <algorithm>
#include <cmath>
#include <numeric>

#include "vox/errors.hpp"
#include "vox/learn.hpp"

namespace vox {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct Builder {
    const LabeledSet& data;
    const std::vector<double>& grad;  // residuals g_i = y_i - p_i
    const std::vector<double>& hess;  // h_i = p_i (1 - p_i)
    BoostStump& tree;
    int max_depth;

    // Newton leaf value with a small ridge term for empty-hessian safety.
    double leaf_value(const std::vector<std::size_t>& rows) const {
        double g = 0.0, h = 0.0;
        for (std::size_t r : rows) {
            g += grad[r];
            h += hess[r];
        }
        return g / (h + 1e-6);
    }

    int build(std::vector<std::size_t>& rows, int depth) {
        const int idx = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        int best_feature = -1;
        double best_threshold = 0.0;
        // Accept zero-gain splits while depth remains: a level-1 split can be
        // gainless even though its children split informatively (XOR-shaped
        // residuals); such splits are harmless since their leaves fit ~0.
        double best_score = -1.0;
        if (depth < max_depth && rows.size() >= 2) {
            double g_total = 0.0, h_total = 0.0;
            for (std::size_t r : rows) {
                g_total += grad[r];
                h_total += hess[r];
            }
            const double parent_score = g_total * g_total / (h_total + 1e-6);
            std::vector<std::pair<double, std::size_t>> column(rows.size());
            for (std::size_t c = 0; c < data.dim(); ++c) {
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    column[i] = {data.x[rows[i]][c], rows[i]};
                }
                std::sort(column.begin(), column.end());
                double g_left = 0.0, h_left = 0.0;
                for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                    g_left += grad[column[i].second];
                    h_left += hess[column[i].second];
                    if (column[i].first == column[i + 1].first) continue;
                    const double g_right = g_total - g_left;
                    const double h_right = h_total - h_left;
                    const double score = g_left * g_left / (h_left + 1e-6) +
                                         g_right * g_right / (h_right + 1e-6) - parent_score;
                    if (score > best_score + 1e-12) {
                        best_score = score;
                        best_feature = static_cast<int>(c);
                        best_threshold = 0.5 * (column[i].first + column[i + 1].first);
                    }
                }
            }
        }

        if (best_feature < 0) {
            tree.nodes[idx].value = leaf_value(rows);
            return idx;
        }
        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (data.x[r][best_feature] < best_threshold ? left_rows : right_rows).push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) {
            tree.nodes[idx].value = leaf_value(rows);
            return idx;
        }
        tree.nodes[idx].feature = best_feature;
        tree.nodes[idx].threshold = best_threshold;
        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        tree.nodes[idx].left = left;
        tree.nodes[idx].right = right;
        return idx;
    }
};

}  // namespace

double BoostStump::eval(const std::vector<double>& x) const {
    int idx = 0;
    while (nodes[idx].feature >= 0) {
        idx = x[nodes[idx].feature] < nodes[idx].threshold ? nodes[idx].left : nodes[idx].right;
    }
    return nodes[idx].value;
}

double GboostModel::decision_value(const std::vector<double>& x) const {
    double z = base_score_;
    for (const auto& tree : trees_) z += learning_rate_ * tree.eval(x);
    return z;
}

double GboostModel::predict_proba(const std::vector<double>& x) const {
    return sigmoid(decision_value(x));
}

TrainedModel train_gboost(const LabeledSet& data, int rounds, int depth, double learning_rate) {
    validate_training_set(data);
    if (rounds < 0 || depth < 1) raise(ErrorCode::InvalidArgument, "bad boosting parameters");

    const std::size_t n = data.size();
    double positives = 0.0;
    for (int y : data.y) positives += y ? 1.0 : 0.0;
    double base_rate = positives / static_cast<double>(n);
    base_rate = std::clamp(base_rate, 1e-6, 1.0 - 1e-6);
    const double base_score = std::log(base_rate / (1.0 - base_rate));

    std::vector<double> decision(n, base_score);
    std::vector<double> grad(n), hess(n);
    std::vector<BoostStump> trees;
    trees.reserve(static_cast<std::size_t>(rounds));

    for (int r = 0; r < rounds; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(decision[i]);
            grad[i] = (data.y[i] ? 1.0 : 0.0) - p;
            hess[i] = std::max(p * (1.0 - p), 1e-12);
        }
        BoostStump stump;
        Builder builder{data, grad, hess, stump, depth};
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        builder.build(rows, 0);
        for (std::size_t i = 0; i < n; ++i) {
            decision[i] += learning_rate * stump.eval(data.x[i]);
        }
        trees.push_back(std::move(stump));
    }
    return TrainedModel{std::make_shared<GboostModel>(base_score, learning_rate, std::move(trees))};
}

}  // namespace vox
