#include <algorithm>
#include <cmath>

#include "vox/errors.hpp"
#include "vox/learn.hpp"

namespace vox {

std::pair<int, double> knn_predict(const LabeledSet& train, const std::vector<double>& query,
                                   int k) {
    if (train.x.empty()) raise(ErrorCode::EmptyTrainingSet, "kNN with no training rows");
    if (k < 1 || static_cast<std::size_t>(k) > train.size()) {
        raise(ErrorCode::InvalidArgument, "k must be in [1, n]");
    }
    if (query.size() != train.dim()) raise(ErrorCode::LengthMismatch, "query dimension");

    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < query.size(); ++c) {
            const double diff = train.x[i][c] - query[c];
            d2 += diff * diff;
        }
        dist[i] = {d2, i};  // ties resolve toward the lower row index
    }
    std::sort(dist.begin(), dist.end());

    int positives = 0;
    for (int i = 0; i < k; ++i) positives += train.y[dist[i].second] ? 1 : 0;
    const double score = static_cast<double>(positives) / k;
    return {score >= 0.5 ? 1 : 0, score};
}

double KnnModel::predict_proba(const std::vector<double>& x) const {
    return knn_predict(train_, x, k_).second;
}

TrainedModel train_knn(const LabeledSet& data, int k) {
    validate_training_set(data);
    if (k < 1 || static_cast<std::size_t>(k) > data.size()) {
        raise(ErrorCode::InvalidArgument, "k must be in [1, n]");
    }
    return TrainedModel{std::make_shared<KnnModel>(data, k)};
}

}  // namespace vox
