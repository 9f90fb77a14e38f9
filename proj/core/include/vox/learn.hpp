#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vox/features.hpp"

namespace vox {

// Normalized feature rows plus binary labels (positive = HSA or refusal).
struct LabeledSet {
    std::vector<std::vector<double>> x;  // n rows, d columns each
    std::vector<int> y;                  // 0/1

    std::size_t size() const { return x.size(); }
    std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }
};

void validate_training_set(const LabeledSet& data);

enum class ModelKind { Tree, Knn, Logistic, Gp, Gboost, Mlp };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

class Model {
  public:
    virtual ~Model() = default;
    virtual ModelKind kind() const = 0;
    // P(positive | x); always in [0, 1].
    virtual double predict_proba(const std::vector<double>& x) const = 0;
};

struct TrainedModel {
    std::shared_ptr<const Model> impl;

    ModelKind kind() const { return impl->kind(); }
    double predict_proba(const std::vector<double>& x) const { return impl->predict_proba(x); }
    // Hard label with the documented >= 0.5 convention.
    int predict_label(const std::vector<double>& x) const {
        return predict_proba(x) >= 0.5 ? 1 : 0;
    }
};

// ---- decision tree ----------------------------------------------------

struct TreeNode {
    // split node when feature >= 0 (x[feature] < threshold goes left)
    int feature = -1;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left, right;
    // class counts reaching the node; entropy of that distribution in bits
    std::array<std::size_t, 2> class_counts{};
    double entropy_bits = 0.0;

    bool is_leaf() const { return feature < 0; }
};

class DecisionTreeModel final : public Model {
  public:
    explicit DecisionTreeModel(std::unique_ptr<TreeNode> root) : root_(std::move(root)) {}
    ModelKind kind() const override { return ModelKind::Tree; }
    double predict_proba(const std::vector<double>& x) const override;
    const TreeNode& root() const { return *root_; }

  private:
    std::unique_ptr<TreeNode> root_;
};

// Greedy information-gain splits on midpoint thresholds; ties broken toward
// the lowest feature index, then the lowest threshold.  max_depth 0 means
// unbounded.  Identical vectors with mixed labels yield a single impure
// leaf rather than an error.
TrainedModel train_decision_tree(const LabeledSet& data, int max_depth = 0, int min_leaf = 2);

double entropy_bits(std::size_t n0, std::size_t n1);

// ---- k nearest neighbors ----------------------------------------------

class KnnModel final : public Model {
  public:
    KnnModel(LabeledSet train, int k) : train_(std::move(train)), k_(k) {}
    ModelKind kind() const override { return ModelKind::Knn; }
    double predict_proba(const std::vector<double>& x) const override;
    const LabeledSet& training_set() const { return train_; }
    int k() const { return k_; }

  private:
    LabeledSet train_;
    int k_;
};

// Majority label among the k Euclidean-nearest training rows; distance ties
// break toward the lower row index; the score is the positive-neighbor
// fraction.
std::pair<int, double> knn_predict(const LabeledSet& train, const std::vector<double>& query,
                                   int k = 3);
TrainedModel train_knn(const LabeledSet& data, int k = 3);

// ---- logistic regression ----------------------------------------------

class LogisticModel final : public Model {
  public:
    LogisticModel(std::vector<double> w, double b) : w_(std::move(w)), b_(b) {}
    ModelKind kind() const override { return ModelKind::Logistic; }
    double predict_proba(const std::vector<double>& x) const override;
    const std::vector<double>& weights() const { return w_; }
    double bias() const { return b_; }

  private:
    std::vector<double> w_;
    double b_;
};

// Full-batch gradient descent with backtracking line search on
// mean log-loss + l2*|w|^2/2 (bias unregularized).  Converges when the
// gradient infinity-norm drops below tol.
TrainedModel train_logistic(const LabeledSet& data, double l2 = 1e-4, int max_iters = 10000,
                            double tol = 1e-6);

// Loss/gradient at an arbitrary point, used by the finite-difference checks.
double logistic_loss(const LabeledSet& data, const std::vector<double>& w, double b, double l2,
                     std::vector<double>* grad_w = nullptr, double* grad_b = nullptr);

// ---- Gaussian process classifier ---------------------------------------

struct GpConfig {
    // RBF k(x,x') = variance * exp(-|x-x'|^2 / (2 d length_scale^2)) with d
    // the feature count; the per-dimension normalization keeps unit length
    // scale meaningful on z-scored features regardless of dimensionality.
    double length_scale = 1.0;
    double variance = 1.0;
    double jitter = 1e-8;   // added to the kernel diagonal
    int max_newton = 100;
    double tol = 1e-8;      // objective-change convergence threshold
    std::size_t max_n = 5000;
};

class GpModel final : public Model {
  public:
    GpModel(std::vector<std::vector<double>> x, std::vector<double> grad_at_mode,
            std::vector<double> sqrt_w, std::vector<double> chol_lower, GpConfig config)
        : x_(std::move(x)),
          grad_at_mode_(std::move(grad_at_mode)),
          sqrt_w_(std::move(sqrt_w)),
          chol_lower_(std::move(chol_lower)),
          config_(config) {}
    ModelKind kind() const override { return ModelKind::Gp; }
    double predict_proba(const std::vector<double>& x) const override;

    const std::vector<std::vector<double>>& training_inputs() const { return x_; }
    const std::vector<double>& grad_at_mode() const { return grad_at_mode_; }
    const std::vector<double>& sqrt_w() const { return sqrt_w_; }
    const std::vector<double>& chol_lower() const { return chol_lower_; }
    const GpConfig& config() const { return config_; }

  private:
    std::vector<std::vector<double>> x_;
    std::vector<double> grad_at_mode_;  // t - pi at the posterior mode
    std::vector<double> sqrt_w_;
    std::vector<double> chol_lower_;    // row-major lower Cholesky of B
    GpConfig config_;
};

// Laplace-approximated GP binary classifier with logistic likelihood and an
// RBF kernel.  Damped Newton iterations on the latent mode; the unnormalized
// log posterior is non-decreasing iteration to iteration (objective_trace
// records it).  Throws NonConvergence / SingularKernel.
TrainedModel train_gp_classifier(const LabeledSet& data, const GpConfig& config = {},
                                 std::vector<double>* objective_trace = nullptr);

// ---- gradient boosting --------------------------------------------------

struct BoostStump {
    // depth-limited regression tree stored flat: nodes[0] is the root
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1, right = -1;
        double value = 0.0;  // leaf output
    };
    std::vector<Node> nodes;
    double eval(const std::vector<double>& x) const;
};

class GboostModel final : public Model {
  public:
    GboostModel(double base_score, double learning_rate, std::vector<BoostStump> trees)
        : base_score_(base_score), learning_rate_(learning_rate), trees_(std::move(trees)) {}
    ModelKind kind() const override { return ModelKind::Gboost; }
    double predict_proba(const std::vector<double>& x) const override;
    double decision_value(const std::vector<double>& x) const;
    double base_score() const { return base_score_; }
    double learning_rate() const { return learning_rate_; }
    const std::vector<BoostStump>& trees() const { return trees_; }

  private:
    double base_score_;
    double learning_rate_;
    std::vector<BoostStump> trees_;
};

// Logistic-loss boosting of depth-limited regression trees fitted to the
// gradient residuals, Newton leaf values, no subsampling (deterministic).
// rounds = 0 leaves the constant base-rate model.
TrainedModel train_gboost(const LabeledSet& data, int rounds = 100, int depth = 2,
                          double learning_rate = 0.1);

// ---- multilayer perceptron ----------------------------------------------

class MlpModel final : public Model {
  public:
    MlpModel(int hidden, std::vector<double> params) : hidden_(hidden), params_(std::move(params)) {}
    ModelKind kind() const override { return ModelKind::Mlp; }
    double predict_proba(const std::vector<double>& x) const override;
    int hidden() const { return hidden_; }
    const std::vector<double>& params() const { return params_; }

  private:
    int hidden_;
    // layout: W1 (hidden x d, row major), b1 (hidden), w2 (hidden), b2
    std::vector<double> params_;
};

// One tanh hidden layer, logistic output, full-batch gradient descent with a
// fixed step.  Weights start uniform in [-1/sqrt(d), +1/sqrt(d)] from the
// seed, so identical seeds give bit-identical models.
TrainedModel train_mlp(const LabeledSet& data, int hidden = 16, int epochs = 500,
                       std::uint64_t seed = 0, double learning_rate = 0.5);

// Mean log-loss and gradient for a flat parameter vector (finite-difference
// checks drive this directly).
double mlp_loss(const LabeledSet& data, int hidden, const std::vector<double>& params,
                std::vector<double>* grad = nullptr);

std::size_t mlp_param_count(std::size_t dim, int hidden);

// ---- shared trainer dispatch ---------------------------------------------

struct LearnParams {
    int knn_k = 3;
    double logistic_l2 = 1e-4;
    int logistic_max_iters = 10000;
    double logistic_tol = 1e-6;
    GpConfig gp;
    int gboost_rounds = 100;
    int gboost_depth = 2;
    double gboost_lr = 0.1;
    int mlp_hidden = 16;
    int mlp_epochs = 500;
    double mlp_lr = 0.5;
    int tree_max_depth = 0;  // unbounded
    int tree_min_leaf = 2;
};

TrainedModel train_model(ModelKind kind, const LabeledSet& data, const LearnParams& params,
                         std::uint64_t seed);

// ---- gender pre-classifier -----------------------------------------------

// Logistic regression on raw (unnormalized) features; picks which gender's
// normalization stats apply to unannotated recordings.
class GenderClassifier {
  public:
    GenderClassifier() = default;
    GenderClassifier(std::vector<double> w, double b) : w_(std::move(w)), b_(b) {}

    bool trained() const { return !w_.empty(); }
    // Returns the gender and P(female).  Throws UntrainedModel.
    Gender classify(const FeatureVector& raw, double* p_female = nullptr) const;

    const std::vector<double>& weights() const { return w_; }
    double bias() const { return b_; }

  private:
    std::vector<double> w_;
    double b_ = 0.0;
};

GenderClassifier train_gender_classifier(const FeatureMatrix& raw_matrix);

// ---- serialization ---------------------------------------------------------

// A trained model plus everything needed to apply it to fresh recordings.
struct ModelBundle {
    TrainedModel model;
    NormStats norm;
    std::vector<std::size_t> feature_subset;  // canonical indices, ascending
    GenderClassifier gender;                  // optional (trained() may be false)
};

std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const std::string& json_text);

}  // namespace vox
