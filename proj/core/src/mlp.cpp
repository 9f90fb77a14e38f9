#include <cmath>

#include "vox/errors.hpp"
#include "vox/learn.hpp"
#include "vox/rng.hpp"

namespace vox {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// parameter layout: W1 (hidden x d, row major) | b1 (hidden) | w2 (hidden) | b2
struct Layout {
    std::size_t d;
    std::size_t h;
    std::size_t w1_off = 0;
    std::size_t b1_off, w2_off, b2_off;
    Layout(std::size_t dim, int hidden)
        : d(dim), h(static_cast<std::size_t>(hidden)) {
        b1_off = h * d;
        w2_off = b1_off + h;
        b2_off = w2_off + h;
    }
    std::size_t total() const { return b2_off + 1; }
};

double forward(const Layout& lay, const std::vector<double>& p, const std::vector<double>& x,
               std::vector<double>* hidden_out) {
    double z = p[lay.b2_off];
    for (std::size_t j = 0; j < lay.h; ++j) {
        double a = p[lay.b1_off + j];
        const double* w_row = &p[lay.w1_off + j * lay.d];
        for (std::size_t c = 0; c < lay.d; ++c) a += w_row[c] * x[c];
        const double hval = std::tanh(a);
        if (hidden_out) (*hidden_out)[j] = hval;
        z += p[lay.w2_off + j] * hval;
    }
    return z;
}

}  // namespace

std::size_t mlp_param_count(std::size_t dim, int hidden) {
    return Layout(dim, hidden).total();
}

double mlp_loss(const LabeledSet& data, int hidden, const std::vector<double>& params,
                std::vector<double>* grad) {
    const Layout lay(data.dim(), hidden);
    if (params.size() != lay.total()) raise(ErrorCode::LengthMismatch, "MLP parameter vector size");
    const std::size_t n = data.size();
    if (grad) grad->assign(lay.total(), 0.0);

    std::vector<double> h(lay.h);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = forward(lay, params, data.x[i], &h);
        loss += softplus(z) - (data.y[i] ? z : 0.0);
        if (!grad) continue;
        const double err = sigmoid(z) - (data.y[i] ? 1.0 : 0.0);  // dLoss/dz
        (*grad)[lay.b2_off] += err;
        for (std::size_t j = 0; j < lay.h; ++j) {
            (*grad)[lay.w2_off + j] += err * h[j];
            const double dh = err * params[lay.w2_off + j] * (1.0 - h[j] * h[j]);
            (*grad)[lay.b1_off + j] += dh;
            double* gw = &(*grad)[lay.w1_off + j * lay.d];
            const auto& x = data.x[i];
            for (std::size_t c = 0; c < lay.d; ++c) gw[c] += dh * x[c];
        }
    }
    if (grad) {
        for (auto& g : *grad) g /= static_cast<double>(n);
    }
    return loss / static_cast<double>(n);
}

double MlpModel::predict_proba(const std::vector<double>& x) const {
    const Layout lay(x.size(), hidden_);
    if (params_.size() != lay.total()) raise(ErrorCode::LengthMismatch, "MLP input dimension");
    return sigmoid(forward(lay, params_, x, nullptr));
}

TrainedModel train_mlp(const LabeledSet& data, int hidden, int epochs, std::uint64_t seed,
                       double learning_rate) {
    validate_training_set(data);
    if (hidden < 1) raise(ErrorCode::InvalidArgument, "hidden units must be >= 1");
    const Layout lay(data.dim(), hidden);

    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(data.dim()));
    std::vector<double> params(lay.total());
    for (auto& p : params) p = rng.uniform(-bound, bound);

    std::vector<double> grad;
    for (int e = 0; e < epochs; ++e) {
        mlp_loss(data, hidden, params, &grad);
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate * grad[i];
    }
    return TrainedModel{std::make_shared<MlpModel>(hidden, std::move(params))};
}

}  // namespace vox
