#include <algorithm>
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

// log(1 + e^z), overflow-safe
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double logistic_loss(const LabeledSet& data, const std::vector<double>& w, double b, double l2,
                     std::vector<double>* grad_w, double* grad_b) {
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    double loss = 0.0;
    if (grad_w) grad_w->assign(d, 0.0);
    if (grad_b) *grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = b;
        for (std::size_t c = 0; c < d; ++c) z += w[c] * data.x[i][c];
        // -log p(y|z) = softplus(z) - y z
        loss += softplus(z) - (data.y[i] ? z : 0.0);
        if (grad_w || grad_b) {
            const double err = sigmoid(z) - (data.y[i] ? 1.0 : 0.0);
            if (grad_w) {
                for (std::size_t c = 0; c < d; ++c) (*grad_w)[c] += err * data.x[i][c];
            }
            if (grad_b) *grad_b += err;
        }
    }
    loss /= static_cast<double>(n);
    if (grad_w) {
        for (std::size_t c = 0; c < d; ++c) {
            (*grad_w)[c] = (*grad_w)[c] / static_cast<double>(n) + l2 * w[c];
        }
    }
    if (grad_b) *grad_b /= static_cast<double>(n);
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return loss + 0.5 * l2 * reg;
}

double LogisticModel::predict_proba(const std::vector<double>& x) const {
    double z = b_;
    for (std::size_t c = 0; c < w_.size() && c < x.size(); ++c) z += w_[c] * x[c];
    return sigmoid(z);
}

TrainedModel train_logistic(const LabeledSet& data, double l2, int max_iters, double tol) {
    validate_training_set(data);
    const std::size_t d = data.dim();
    std::vector<double> w(d, 0.0);
    double b = 0.0;

    std::vector<double> grad_w;
    double grad_b = 0.0;
    double loss = logistic_loss(data, w, b, l2, &grad_w, &grad_b);
    double step = 1.0;
    for (int iter = 0; iter < max_iters; ++iter) {
        double gmax = std::abs(grad_b);
        double gsq = grad_b * grad_b;
        for (double g : grad_w) {
            gmax = std::max(gmax, std::abs(g));
            gsq += g * g;
        }
        if (gmax < tol) break;

        // backtracking line search (Armijo, c = 1/2)
        step = std::min(step * 2.0, 64.0);
        std::vector<double> w_new(d);
        double b_new = 0.0;
        double loss_new = 0.0;
        while (true) {
            for (std::size_t c = 0; c < d; ++c) w_new[c] = w[c] - step * grad_w[c];
            b_new = b - step * grad_b;
            loss_new = logistic_loss(data, w_new, b_new, l2, nullptr, nullptr);
            if (loss_new <= loss - 0.5 * step * gsq || step < 1e-12) break;
            step *= 0.5;
        }
        w = std::move(w_new);
        b = b_new;
        loss = logistic_loss(data, w, b, l2, &grad_w, &grad_b);
    }
    return TrainedModel{std::make_shared<LogisticModel>(std::move(w), b)};
}

}  // namespace vox
