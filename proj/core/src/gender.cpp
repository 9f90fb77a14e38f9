#include <cmath>

#include "vox/errors.hpp"
#include "vox/learn.hpp"

namespace vox {

namespace {
double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}
}  // namespace

Gender GenderClassifier::classify(const FeatureVector& raw, double* p_female) const {
    if (!trained()) raise(ErrorCode::UntrainedModel, "gender classifier not trained");
    double z = b_;
    for (std::size_t c = 0; c < kFeatureCount; ++c) z += w_[c] * raw[c];
    const double p = sigmoid(z);
    if (p_female) *p_female = p;
    return p >= 0.5 ? Gender::Female : Gender::Male;
}

GenderClassifier train_gender_classifier(const FeatureMatrix& raw_matrix) {
    // Raw acoustic scales span orders of magnitude (F0 in hundreds of Hz,
    // jitter in hundredths), so optimize in standardized coordinates and map
    // the weights back to raw space afterwards; the fitted function is the
    // same either way.
    const std::size_t n = raw_matrix.rows.size();
    if (n < 4) raise(ErrorCode::TooFewRows, "gender classifier needs >= 4 rows");

    std::array<double, kFeatureCount> mean{}, sd{};
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double sum = 0.0;
        for (const auto& row : raw_matrix.rows) sum += row.values[c];
        mean[c] = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& row : raw_matrix.rows) {
            ss += (row.values[c] - mean[c]) * (row.values[c] - mean[c]);
        }
        sd[c] = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd[c] < 1e-12) sd[c] = 1.0;  // constant column contributes nothing
    }

    LabeledSet data;
    data.x.reserve(n);
    data.y.reserve(n);
    for (const auto& row : raw_matrix.rows) {
        std::vector<double> x(kFeatureCount);
        for (std::size_t c = 0; c < kFeatureCount; ++c) x[c] = (row.values[c] - mean[c]) / sd[c];
        data.x.push_back(std::move(x));
        data.y.push_back(row.meta.gender == Gender::Female ? 1 : 0);
    }
    TrainedModel model = train_logistic(data, 1e-3, 5000, 1e-7);
    const auto& logistic = dynamic_cast<const LogisticModel&>(*model.impl);

    std::vector<double> w_raw(kFeatureCount);
    double b_raw = logistic.bias();
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        w_raw[c] = logistic.weights()[c] / sd[c];
        b_raw -= logistic.weights()[c] * mean[c] / sd[c];
    }
    return GenderClassifier(std::move(w_raw), b_raw);
}

}  // namespace vox
