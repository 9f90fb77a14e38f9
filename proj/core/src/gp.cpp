#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "vox/errors.hpp"
#include "vox/learn.hpp"

namespace vox {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double log_sigmoid_likelihood(double f, int y) {
    // log p(y|f) for the logistic likelihood, y in {0,1}
    const double softplus = f > 0.0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
    return (y ? f : 0.0) - softplus;
}

// RBF on the dimension-averaged squared distance.  Normalizing by d keeps
// the kernel informative whatever the feature count: with a per-coordinate
// scale the typical distance between z-scored points grows like sqrt(2d) and
// the Gram matrix collapses to the identity for d ~ 18.
double rbf(const std::vector<double>& a, const std::vector<double>& b, double variance,
           double length_scale) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        d2 += diff * diff;
    }
    d2 /= static_cast<double>(a.size());
    return variance * std::exp(-d2 / (2.0 * length_scale * length_scale));
}

}  // namespace

double GpModel::predict_proba(const std::vector<double>& x) const {
    const std::size_t n = x_.size();
    Eigen::VectorXd k_star(n);
    for (std::size_t i = 0; i < n; ++i) {
        k_star(static_cast<Eigen::Index>(i)) = rbf(x_[i], x, config_.variance, config_.length_scale);
    }
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += k_star(static_cast<Eigen::Index>(i)) * grad_at_mode_[i];
    }
    // v = L \ (sqrtW .* k*), sigma^2 = k** - v'v
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs(static_cast<Eigen::Index>(i)) = sqrt_w_[i] * k_star(static_cast<Eigen::Index>(i));
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> L(
        chol_lower_.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd v =
        L.triangularView<Eigen::Lower>().solve(rhs);
    double sigma2 = config_.variance + config_.jitter - v.squaredNorm();
    if (sigma2 < 0.0) sigma2 = 0.0;
    // probit-style approximation of the logistic-Gaussian integral
    const double kappa = 1.0 / std::sqrt(1.0 + kPi * sigma2 / 8.0);
    return sigmoid(kappa * mu);
}

TrainedModel train_gp_classifier(const LabeledSet& data, const GpConfig& config,
                                 std::vector<double>* objective_trace) {
    validate_training_set(data);
    const std::size_t n = data.size();
    if (n > config.max_n) {
        raise(ErrorCode::InvalidArgument,
              "GP training set exceeds the configured cap of " + std::to_string(config.max_n));
    }

    Eigen::MatrixXd K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = rbf(data.x[i], data.x[j], config.variance, config.length_scale);
            K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
        K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += config.jitter;
    }

    Eigen::VectorXd t(n);
    for (std::size_t i = 0; i < n; ++i) t(static_cast<Eigen::Index>(i)) = data.y[i] ? 1.0 : 0.0;

    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    auto objective = [&](const Eigen::VectorXd& a_vec, const Eigen::VectorXd& f_vec) {
        double lik = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lik += log_sigmoid_likelihood(f_vec(static_cast<Eigen::Index>(i)), data.y[i]);
        }
        return -0.5 * a_vec.dot(f_vec) + lik;
    };
    double psi = objective(a, f);
    if (objective_trace) objective_trace->push_back(psi);

    Eigen::VectorXd sqrt_w(n);
    Eigen::MatrixXd L;
    bool converged = false;
    double last_change = 0.0;
    int iterations = 0;

    for (int iter = 0; iter < config.max_newton; ++iter) {
        ++iterations;
        Eigen::VectorXd pi(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(f(static_cast<Eigen::Index>(i)));
            pi(static_cast<Eigen::Index>(i)) = p;
            w(static_cast<Eigen::Index>(i)) = std::max(p * (1.0 - p), 1e-12);
        }
        sqrt_w = w.cwiseSqrt();

        Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
        B.noalias() += sqrt_w.asDiagonal() * K * sqrt_w.asDiagonal();
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() != Eigen::Success) {
            raise(ErrorCode::SingularKernel, "Cholesky of B failed");
        }
        L = llt.matrixL();

        const Eigen::VectorXd b = w.asDiagonal() * f + (t - pi);
        const Eigen::VectorXd kb = K * b;
        const Eigen::VectorXd sol =
            llt.solve((sqrt_w.array() * kb.array()).matrix());
        const Eigen::VectorXd a_candidate = b - (sqrt_w.array() * sol.array()).matrix();

        // Newton with halving: accept only non-decreasing objectives.
        double alpha = 1.0;
        Eigen::VectorXd a_new, f_new;
        double psi_new = psi;
        while (true) {
            a_new = a + alpha * (a_candidate - a);
            f_new = K * a_new;
            psi_new = objective(a_new, f_new);
            if (psi_new >= psi - 1e-12 || alpha < 1e-4) break;
            alpha *= 0.5;
        }
        if (psi_new < psi) {
            // no ascent direction left; treat as converged at the mode
            last_change = 0.0;
            converged = true;
            break;
        }
        last_change = psi_new - psi;
        a = a_new;
        f = f_new;
        psi = psi_new;
        if (objective_trace) objective_trace->push_back(psi);
        if (last_change < config.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        raise(ErrorCode::NonConvergence,
              "GP Laplace Newton did not converge in " + std::to_string(iterations) +
                  " iterations (last objective change " + std::to_string(last_change) + ")");
    }

    // Recompute W and L at the accepted mode so prediction uses matched state.
    Eigen::VectorXd pi(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(f(static_cast<Eigen::Index>(i)));
        pi(static_cast<Eigen::Index>(i)) = p;
        w(static_cast<Eigen::Index>(i)) = std::max(p * (1.0 - p), 1e-12);
    }
    sqrt_w = w.cwiseSqrt();
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
    B.noalias() += sqrt_w.asDiagonal() * K * sqrt_w.asDiagonal();
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) raise(ErrorCode::SingularKernel, "Cholesky of B failed");
    Eigen::MatrixXd Lfinal = llt.matrixL();

    std::vector<double> grad_at_mode(n), sqrt_w_out(n), chol(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        grad_at_mode[i] = t(static_cast<Eigen::Index>(i)) - pi(static_cast<Eigen::Index>(i));
        sqrt_w_out[i] = sqrt_w(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j <= i; ++j) {
            chol[i * n + j] = Lfinal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return TrainedModel{std::make_shared<GpModel>(data.x, std::move(grad_at_mode),
                                                  std::move(sqrt_w_out), std::move(chol), config)};
}

}  // namespace vox
