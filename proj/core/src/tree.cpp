#include <algorithm>
#include <cmath>
#include <numeric>

#include "vox/errors.hpp"
#include "vox/learn.hpp"

namespace vox {

double entropy_bits(std::size_t n0, std::size_t n1) {
    const std::size_t n = n0 + n1;
    if (n == 0 || n0 == 0 || n1 == 0) return 0.0;
    const double p0 = static_cast<double>(n0) / n;
    const double p1 = static_cast<double>(n1) / n;
    return -(p0 * std::log2(p0) + p1 * std::log2(p1));
}

void validate_training_set(const LabeledSet& data) {
    if (data.x.empty()) raise(ErrorCode::EmptyTrainingSet, "no training rows");
    if (data.x.size() != data.y.size()) raise(ErrorCode::LengthMismatch, "rows vs labels");
    const std::size_t d = data.x.front().size();
    for (const auto& row : data.x) {
        if (row.size() != d) raise(ErrorCode::LengthMismatch, "ragged feature rows");
    }
    bool has0 = false, has1 = false;
    for (int y : data.y) (y ? has1 : has0) = true;
    if (data.x.size() < 2 || !has0 || !has1) {
        raise(ErrorCode::EmptyTrainingSet, "training needs >= 2 rows with both labels");
    }
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

std::unique_ptr<TreeNode> build_node(const LabeledSet& data, std::vector<std::size_t>& rows,
                                     int depth, int max_depth, int min_leaf) {
    auto node = std::make_unique<TreeNode>();
    for (std::size_t r : rows) ++node->class_counts[data.y[r] ? 1 : 0];
    node->entropy_bits = entropy_bits(node->class_counts[0], node->class_counts[1]);

    const bool pure = node->class_counts[0] == 0 || node->class_counts[1] == 0;
    const bool depth_capped = max_depth > 0 && depth >= max_depth;
    if (pure || depth_capped || rows.size() < 2 * static_cast<std::size_t>(min_leaf)) {
        return node;
    }

    const std::size_t d = data.dim();
    const double parent_entropy = node->entropy_bits;
    Split best;
    std::vector<std::pair<double, int>> column(rows.size());
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            column[i] = {data.x[rows[i]][c], data.y[rows[i]] ? 1 : 0};
        }
        std::sort(column.begin(), column.end());

        // prefix class counts; candidate thresholds are midpoints between
        // consecutive distinct values
        std::size_t left0 = 0, left1 = 0;
        const std::size_t total0 = node->class_counts[0];
        const std::size_t total1 = node->class_counts[1];
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            ++(column[i].second ? left1 : left0);
            if (column[i].first == column[i + 1].first) continue;
            const std::size_t left_n = i + 1;
            const std::size_t right_n = column.size() - left_n;
            if (left_n < static_cast<std::size_t>(min_leaf) ||
                right_n < static_cast<std::size_t>(min_leaf)) {
                continue;
            }
            const double threshold = 0.5 * (column[i].first + column[i + 1].first);
            const double h_left = entropy_bits(left0, left1);
            const double h_right = entropy_bits(total0 - left0, total1 - left1);
            const double gain = parent_entropy -
                                (static_cast<double>(left_n) * h_left +
                                 static_cast<double>(right_n) * h_right) /
                                    static_cast<double>(column.size());
            // strictly-better wins; exact ties keep the earlier (lower
            // feature, lower threshold) candidate
            if (gain > best.gain + 1e-15) {
                best = {static_cast<int>(c), threshold, gain};
            }
        }
    }
    if (best.feature < 0 || best.gain <= 1e-15) return node;  // nothing informative

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        (data.x[r][best.feature] < best.threshold ? left_rows : right_rows).push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return node;

    node->feature = best.feature;
    node->threshold = best.threshold;
    node->left = build_node(data, left_rows, depth + 1, max_depth, min_leaf);
    node->right = build_node(data, right_rows, depth + 1, max_depth, min_leaf);
    return node;
}

}  // namespace

double DecisionTreeModel::predict_proba(const std::vector<double>& x) const {
    const TreeNode* node = root_.get();
    while (!node->is_leaf()) {
        node = x[node->feature] < node->threshold ? node->left.get() : node->right.get();
    }
    const std::size_t n = node->class_counts[0] + node->class_counts[1];
    return n == 0 ? 0.5 : static_cast<double>(node->class_counts[1]) / static_cast<double>(n);
}

TrainedModel train_decision_tree(const LabeledSet& data, int max_depth, int min_leaf) {
    validate_training_set(data);
    if (min_leaf < 1) raise(ErrorCode::InvalidArgument, "min_leaf must be >= 1");
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), 0);
    auto root = build_node(data, rows, 0, max_depth, min_leaf);
    return TrainedModel{std::make_shared<DecisionTreeModel>(std::move(root))};
}

}  // namespace vox
