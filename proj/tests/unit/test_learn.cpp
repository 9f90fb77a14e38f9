#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "vox/errors.hpp"
#include "vox/learn.hpp"
#include "vox/rng.hpp"

using namespace vox;

namespace {

LabeledSet one_dim(std::initializer_list<double> xs, std::initializer_list<int> ys) {
    LabeledSet set;
    for (double x : xs) set.x.push_back({x});
    for (int y : ys) set.y.push_back(y);
    return set;
}

// mean log-loss of a trained model on its training data
double training_loss(const TrainedModel& model, const LabeledSet& data) {
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = std::clamp(model.predict_proba(data.x[i]), 1e-12, 1.0 - 1e-12);
        loss += data.y[i] ? -std::log(p) : -std::log(1.0 - p);
    }
    return loss / data.size();
}

double training_accuracy(const TrainedModel& model, const LabeledSet& data) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        correct += model.predict_label(data.x[i]) == data.y[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / data.size();
}

}  // namespace

// ---- decision tree ----------------------------------------------------------

TEST_CASE("tree: 1-D split lands at the midpoint 5.0 with pure leaves") {
    const LabeledSet data = one_dim({1, 2, 8, 9}, {0, 0, 1, 1});
    const TrainedModel model = train_decision_tree(data);
    const auto& tree = dynamic_cast<const DecisionTreeModel&>(*model.impl);
    REQUIRE_FALSE(tree.root().is_leaf());
    CHECK(tree.root().feature == 0);
    CHECK(tree.root().threshold == doctest::Approx(5.0));
    CHECK(tree.root().left->is_leaf());
    CHECK(tree.root().right->is_leaf());
    CHECK(tree.root().left->entropy_bits == 0.0);
    CHECK(tree.root().right->entropy_bits == 0.0);
    CHECK(model.predict_proba({0.0}) == 0.0);
    CHECK(model.predict_proba({10.0}) == 1.0);
}

TEST_CASE("tree: entropies are exact") {
    CHECK(entropy_bits(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy_bits(4, 0) == 0.0);
    CHECK(entropy_bits(0, 7) == 0.0);
    CHECK(entropy_bits(3, 1) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("tree: identical vectors with mixed labels become one impure leaf") {
    LabeledSet data;
    for (int i = 0; i < 6; ++i) {
        data.x.push_back({1.0, 2.0});
        data.y.push_back(i % 2);
    }
    const TrainedModel model = train_decision_tree(data);
    const auto& tree = dynamic_cast<const DecisionTreeModel&>(*model.impl);
    CHECK(tree.root().is_leaf());
    CHECK(tree.root().entropy_bits == doctest::Approx(1.0));
    CHECK(model.predict_proba({1.0, 2.0}) == doctest::Approx(0.5));
}

TEST_CASE("tree: every pure leaf has entropy exactly 0 and splits have positive gain") {
    const LabeledSet data = fixtures::clusters(40, 3, 4.0, 11);
    const TrainedModel model = train_decision_tree(data);
    const auto& tree = dynamic_cast<const DecisionTreeModel&>(*model.impl);

    std::function<void(const TreeNode&)> walk = [&](const TreeNode& node) {
        if (node.is_leaf()) {
            if (node.class_counts[0] == 0 || node.class_counts[1] == 0) {
                CHECK(node.entropy_bits == 0.0);
            }
            return;
        }
        const double child_avg =
            (static_cast<double>(node.left->class_counts[0] + node.left->class_counts[1]) *
                 node.left->entropy_bits +
             static_cast<double>(node.right->class_counts[0] + node.right->class_counts[1]) *
                 node.right->entropy_bits) /
            static_cast<double>(node.class_counts[0] + node.class_counts[1]);
        CHECK(node.entropy_bits - child_avg > 0.0);
        walk(*node.left);
        walk(*node.right);
    };
    walk(tree.root());
}

// ---- k nearest neighbors ----------------------------------------------------

TEST_CASE("knn: query equal to a training point with k = 1") {
    const LabeledSet data = one_dim({1, 2, 3, 4}, {0, 0, 1, 1});
    CHECK(knn_predict(data, {3.0}, 1).first == 1);
    CHECK(knn_predict(data, {2.0}, 1).first == 0);
}

TEST_CASE("knn: two negatives outvote one positive; score is the positive fraction") {
    LabeledSet data;
    data.x = {{0.0, 1.0}, {0.0, -1.0}, {1.0, 0.0}};
    data.y = {0, 0, 1};
    const auto [label, score] = knn_predict(data, {0.0, 0.0}, 3);
    CHECK(label == 0);
    CHECK(score == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("knn matches the argmin-extraction oracle on 50 random queries") {
    Rng rng(314);
    LabeledSet train;
    for (int i = 0; i < 60; ++i) {
        train.x.push_back({rng.normal(), rng.normal(), rng.normal()});
        train.y.push_back(static_cast<int>(rng.below(2)));
    }
    for (int q = 0; q < 50; ++q) {
        const std::vector<double> query = {rng.normal(), rng.normal(), rng.normal()};
        const auto neighbors = oracle::knn_by_argmin(train.x, query, 3);
        int pos = 0;
        for (std::size_t idx : neighbors) pos += train.y[idx];
        const auto [label, score] = knn_predict(train, query, 3);
        CHECK(score == doctest::Approx(pos / 3.0).epsilon(1e-12));
        CHECK(label == (pos >= 2 ? 1 : 0));
    }
}

TEST_CASE("knn errors") {
    LabeledSet empty;
    CHECK_THROWS_AS(knn_predict(empty, {1.0}, 1), Error);
    const LabeledSet data = one_dim({1, 2}, {0, 1});
    CHECK_THROWS_AS(knn_predict(data, {1.0}, 3), Error);
}

// ---- logistic regression ----------------------------------------------------

TEST_CASE("logistic: separable data fits confidently and monotonically") {
    const LabeledSet data = one_dim({-3, -2, -1, 1, 2, 3}, {0, 0, 0, 1, 1, 1});
    const TrainedModel model = train_logistic(data);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = model.predict_proba(data.x[i]);
        CHECK((data.y[i] ? p : 1.0 - p) >= 0.95);
    }
    // monotone in x
    double prev = 0.0;
    for (double x = -4.0; x <= 4.0; x += 0.5) {
        const double p = model.predict_proba({x});
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("logistic: mirror-symmetric classes cross 0.5 at the symmetry point") {
    const LabeledSet data = one_dim({2, 4, 6, 8}, {0, 0, 1, 1});  // symmetric around 5
    // the optimum has p(5) = 0.5 exactly; drive the optimizer tight enough
    // that the realized probability lands within 1e-6 of it
    const TrainedModel model = train_logistic(data, 1e-4, 100000, 1e-10);
    CHECK(model.predict_proba({5.0}) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("logistic gradients match central finite differences to 1e-6 relative") {
    Rng rng(55);
    LabeledSet data;
    for (int i = 0; i < 30; ++i) {
        data.x.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
        data.y.push_back(static_cast<int>(rng.below(2)));
    }
    std::vector<double> w = {0.3, -0.7, 1.1, 0.05};
    double b = -0.2;
    const double l2 = 1e-3;

    std::vector<double> grad_w;
    double grad_b = 0.0;
    logistic_loss(data, w, b, l2, &grad_w, &grad_b);

    const double h = 1e-6;
    for (std::size_t c = 0; c < w.size(); ++c) {
        std::vector<double> wp = w, wm = w;
        wp[c] += h;
        wm[c] -= h;
        const double fd =
            (logistic_loss(data, wp, b, l2) - logistic_loss(data, wm, b, l2)) / (2.0 * h);
        CHECK(std::abs(fd - grad_w[c]) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
    const double fd_b = (logistic_loss(data, w, b + h, l2) - logistic_loss(data, w, b - h, l2)) /
                        (2.0 * h);
    CHECK(std::abs(fd_b - grad_b) <= 1e-6 * std::max(1.0, std::abs(fd_b)));
}

// ---- Gaussian process ---------------------------------------------------------

TEST_CASE("gp: a faraway query reverts to the 0.5 prior") {
    const LabeledSet data = fixtures::clusters(20, 2, 3.0, 3);
    const TrainedModel model = train_gp_classifier(data);
    CHECK(model.predict_proba({50.0, 50.0}) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("gp: two opposite points are exactly ambivalent at the midpoint") {
    LabeledSet data;
    data.x = {{-1.0}, {1.0}};
    data.y = {0, 1};
    const TrainedModel model = train_gp_classifier(data);
    CHECK(model.predict_proba({0.0}) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(model.predict_proba({2.0}) > 0.5);
    CHECK(model.predict_proba({-2.0}) < 0.5);
}

TEST_CASE("gp: separable clusters reach 0.98 training accuracy") {
    const LabeledSet data = fixtures::clusters(50, 2, 6.0, 9);
    const TrainedModel model = train_gp_classifier(data);
    CHECK(training_accuracy(model, data) >= 0.98);
}

TEST_CASE("gp: Newton iterations never decrease the log posterior") {
    const LabeledSet data = fixtures::clusters(30, 2, 4.0, 21);
    std::vector<double> trace;
    train_gp_classifier(data, {}, &trace);
    REQUIRE(trace.size() >= 3);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] >= trace[i - 1] - 1e-9);
    }
}

TEST_CASE("gp: size cap raises") {
    GpConfig config;
    config.max_n = 10;
    const LabeledSet data = fixtures::clusters(20, 2, 3.0, 1);
    CHECK_THROWS_AS(train_gp_classifier(data, config), Error);
}

// ---- gradient boosting ---------------------------------------------------------

TEST_CASE("gboost: depth-2 trees express XOR exactly") {
    LabeledSet data;
    data.x = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    data.y = {0, 1, 1, 0};
    const TrainedModel model = train_gboost(data, 100, 2, 0.1);
    CHECK(training_accuracy(model, data) == 1.0);
}

TEST_CASE("gboost: zero rounds yields the base-rate constant") {
    LabeledSet data;
    data.x = {{0.0}, {1.0}, {2.0}, {3.0}};
    data.y = {1, 0, 0, 0};
    const TrainedModel model = train_gboost(data, 0, 2, 0.1);
    for (const auto& x : data.x) {
        CHECK(model.predict_proba(x) == doctest::Approx(0.25).epsilon(1e-9));
    }
}

TEST_CASE("gboost: training loss never increases with more rounds") {
    const LabeledSet data = fixtures::clusters(30, 3, 1.5, 77);
    double prev = 1e300;
    for (int rounds : {0, 5, 10, 25, 50, 100}) {
        const TrainedModel model = train_gboost(data, rounds, 2, 0.1);
        const double loss = training_loss(model, data);
        CHECK(loss <= prev + 1e-12);
        prev = loss;
    }
}

// ---- MLP -----------------------------------------------------------------------

TEST_CASE("mlp gradients match central finite differences to 1e-4 relative") {
    Rng rng(88);
    LabeledSet data;
    for (int i = 0; i < 20; ++i) {
        data.x.push_back({rng.normal(), rng.normal(), rng.normal()});
        data.y.push_back(static_cast<int>(rng.below(2)));
    }
    const int hidden = 5;
    std::vector<double> params(mlp_param_count(3, hidden));
    for (auto& p : params) p = rng.uniform(-0.5, 0.5);

    std::vector<double> grad;
    mlp_loss(data, hidden, params, &grad);
    const double h = 1e-5;
    for (std::size_t i = 0; i < params.size(); ++i) {
        std::vector<double> pp = params, pm = params;
        pp[i] += h;
        pm[i] -= h;
        const double fd = (mlp_loss(data, hidden, pp) - mlp_loss(data, hidden, pm)) / (2.0 * h);
        CHECK(std::abs(fd - grad[i]) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("mlp: separable clusters reach 0.95 training accuracy") {
    const LabeledSet data = fixtures::clusters(40, 2, 5.0, 13);
    const TrainedModel model = train_mlp(data, 16, 500, 4242);
    CHECK(training_accuracy(model, data) >= 0.95);
}

TEST_CASE("mlp: identical seeds give bit-identical parameters") {
    const LabeledSet data = fixtures::clusters(20, 2, 3.0, 31);
    const TrainedModel a = train_mlp(data, 8, 50, 999);
    const TrainedModel b = train_mlp(data, 8, 50, 999);
    const auto& ma = dynamic_cast<const MlpModel&>(*a.impl);
    const auto& mb = dynamic_cast<const MlpModel&>(*b.impl);
    REQUIRE(ma.params().size() == mb.params().size());
    for (std::size_t i = 0; i < ma.params().size(); ++i) {
        REQUIRE(ma.params()[i] == mb.params()[i]);
    }
}

// ---- cross-cutting properties -----------------------------------------------

TEST_CASE("every model outputs probabilities in [0, 1]") {
    const LabeledSet data = fixtures::clusters(25, 3, 2.0, 56);
    Rng rng(777);
    LearnParams params;
    for (ModelKind kind : {ModelKind::Tree, ModelKind::Knn, ModelKind::Logistic, ModelKind::Gp,
                           ModelKind::Gboost, ModelKind::Mlp}) {
        const TrainedModel model = train_model(kind, data, params, 5);
        for (int q = 0; q < 25; ++q) {
            const std::vector<double> x = {rng.normal(0, 5), rng.normal(0, 5), rng.normal(0, 5)};
            const double p = model.predict_proba(x);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("label-flip symmetry") {
    const LabeledSet data = fixtures::clusters(25, 2, 4.0, 42);
    LabeledSet flipped = data;
    for (auto& y : flipped.y) y = 1 - y;

    Rng rng(4141);
    std::vector<std::vector<double>> queries;
    for (int q = 0; q < 20; ++q) queries.push_back({rng.normal(0, 2), rng.normal(0, 2)});

    SUBCASE("logistic: p -> 1 - p to optimizer tolerance") {
        const TrainedModel a = train_logistic(data);
        const TrainedModel b = train_logistic(flipped);
        for (const auto& q : queries) {
            CHECK(a.predict_proba(q) == doctest::Approx(1.0 - b.predict_proba(q)).epsilon(1e-4));
        }
    }
    SUBCASE("gp: p -> 1 - p to Newton tolerance") {
        const TrainedModel a = train_gp_classifier(data);
        const TrainedModel b = train_gp_classifier(flipped);
        for (const auto& q : queries) {
            CHECK(a.predict_proba(q) == doctest::Approx(1.0 - b.predict_proba(q)).epsilon(1e-6));
        }
    }
    SUBCASE("mlp: approximate symmetry (nonconvex, unsymmetric init)") {
        const TrainedModel a = train_mlp(data, 16, 500, 7);
        const TrainedModel b = train_mlp(flipped, 16, 500, 7);
        for (const auto& q : data.x) {
            CHECK(a.predict_proba(q) == doctest::Approx(1.0 - b.predict_proba(q)).epsilon(0.05));
        }
    }
    SUBCASE("tree and knn: hard labels flip") {
        const TrainedModel ta = train_decision_tree(data);
        const TrainedModel tb = train_decision_tree(flipped);
        const TrainedModel ka = train_knn(data, 3);
        const TrainedModel kb = train_knn(flipped, 3);
        for (const auto& q : data.x) {
            CHECK(ta.predict_label(q) == 1 - tb.predict_label(q));
            CHECK(ka.predict_label(q) == 1 - kb.predict_label(q));
        }
    }
}

TEST_CASE("feature-scale invariance through normalization") {
    // multiplying a raw column by c > 0 before fit+normalize leaves the
    // z-scores, and therefore the predictions, unchanged
    auto lm = fixtures::make_matrix({}, 65);
    FeatureMatrix scaled = lm.matrix;
    for (auto& row : scaled.rows) row.values[kMeanF0] *= 37.0;

    std::vector<std::size_t> rows(lm.matrix.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;

    const FeatureMatrix za = normalize(lm.matrix, fit_norm_stats(lm.matrix, rows));
    const FeatureMatrix zb = normalize(scaled, fit_norm_stats(scaled, rows));

    LabeledSet sa, sb;
    for (std::size_t r = 0; r < za.rows.size(); ++r) {
        sa.x.emplace_back(za.rows[r].values.begin(), za.rows[r].values.end());
        sb.x.emplace_back(zb.rows[r].values.begin(), zb.rows[r].values.end());
        sa.y.push_back(lm.labels[r]);
        sb.y.push_back(lm.labels[r]);
    }
    const TrainedModel ma = train_logistic(sa);
    const TrainedModel mb = train_logistic(sb);
    for (std::size_t r = 0; r < sa.x.size(); ++r) {
        CHECK(ma.predict_proba(sa.x[r]) == doctest::Approx(mb.predict_proba(sb.x[r])).epsilon(1e-6));
    }
}

// ---- gender classifier -----------------------------------------------------------

TEST_CASE("gender classifier separates Table-1-like F0 profiles") {
    // corpus with female mean F0 around 196 and male around 120
    fixtures::MatrixSpec spec;
    spec.speakers = 40;
    auto lm = fixtures::make_matrix(spec, 2025);
    for (auto& row : lm.matrix.rows) {
        const bool female = row.meta.gender == Gender::Female;
        row.values[kMeanF0] = female ? 195.97 : 120.17;
        row.values[kMinF0] = female ? 131.22 : 87.67;
        row.values[kMaxF0] = female ? 320.82 : 216.15;
    }
    // re-add noise
    Rng rng(3);
    for (auto& row : lm.matrix.rows) {
        row.values[kMeanF0] += rng.normal(0, 20.0);
        row.values[kMinF0] += rng.normal(0, 18.0);
        row.values[kMaxF0] += rng.normal(0, 40.0);
    }
    // train on even rows, test on odd rows
    FeatureMatrix train;
    for (std::size_t r = 0; r < lm.matrix.rows.size(); r += 2) train.rows.push_back(lm.matrix.rows[r]);
    const GenderClassifier clf = train_gender_classifier(train);

    std::size_t correct = 0, total = 0;
    for (std::size_t r = 1; r < lm.matrix.rows.size(); r += 2) {
        ++total;
        if (clf.classify(lm.matrix.rows[r].values) == lm.matrix.rows[r].meta.gender) ++correct;
    }
    CHECK(static_cast<double>(correct) / total >= 0.95);

    // pooled-mean probes with gender-typical mean F0
    FeatureVector probe{};
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double sum = 0.0;
        for (const auto& row : train.rows) sum += row.values[c];
        probe[c] = sum / train.rows.size();
    }
    probe[kMeanF0] = 196.0;
    CHECK(clf.classify(probe) == Gender::Female);
    probe[kMeanF0] = 120.0;
    CHECK(clf.classify(probe) == Gender::Male);
}

TEST_CASE("untrained gender classifier raises") {
    GenderClassifier clf;
    FeatureVector v{};
    CHECK_THROWS_AS(clf.classify(v), Error);
}

// ---- serialization -----------------------------------------------------------------

TEST_CASE("model bundles survive a JSON round trip with identical predictions") {
    const LabeledSet data = fixtures::clusters(20, 3, 3.0, 404);
    Rng rng(31337);
    std::vector<std::vector<double>> queries;
    for (int q = 0; q < 15; ++q) {
        queries.push_back({rng.normal(), rng.normal(), rng.normal()});
    }

    LearnParams params;
    params.gboost_rounds = 20;
    params.mlp_epochs = 50;
    for (ModelKind kind : {ModelKind::Tree, ModelKind::Knn, ModelKind::Logistic, ModelKind::Gp,
                           ModelKind::Gboost, ModelKind::Mlp}) {
        ModelBundle bundle;
        bundle.model = train_model(kind, data, params, 77);
        bundle.feature_subset = {0, 1, 2};
        const std::string text = bundle_to_json(bundle);
        const ModelBundle back = bundle_from_json(text);
        CHECK(back.model.kind() == kind);
        for (const auto& q : queries) {
            CHECK(back.model.predict_proba(q) ==
                  doctest::Approx(bundle.model.predict_proba(q)).epsilon(1e-12));
        }
    }
}
