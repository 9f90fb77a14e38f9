#include <json.hpp>

#include "vox/errors.hpp"
#include "vox/learn.hpp"

namespace vox {

using nlohmann::ordered_json;

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Tree: return "tree";
        case ModelKind::Knn: return "knn";
        case ModelKind::Logistic: return "logistic";
        case ModelKind::Gp: return "gp";
        case ModelKind::Gboost: return "gboost";
        case ModelKind::Mlp: return "mlp";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "tree") return ModelKind::Tree;
    if (name == "knn") return ModelKind::Knn;
    if (name == "logistic") return ModelKind::Logistic;
    if (name == "gp") return ModelKind::Gp;
    if (name == "gboost") return ModelKind::Gboost;
    if (name == "mlp") return ModelKind::Mlp;
    raise(ErrorCode::InvalidArgument, "unknown classifier '" + name + "'");
}

TrainedModel train_model(ModelKind kind, const LabeledSet& data, const LearnParams& params,
                         std::uint64_t seed) {
    switch (kind) {
        case ModelKind::Tree:
            return train_decision_tree(data, params.tree_max_depth, params.tree_min_leaf);
        case ModelKind::Knn:
            return train_knn(data, params.knn_k);
        case ModelKind::Logistic:
            return train_logistic(data, params.logistic_l2, params.logistic_max_iters,
                                  params.logistic_tol);
        case ModelKind::Gp:
            return train_gp_classifier(data, params.gp);
        case ModelKind::Gboost:
            return train_gboost(data, params.gboost_rounds, params.gboost_depth, params.gboost_lr);
        case ModelKind::Mlp:
            return train_mlp(data, params.mlp_hidden, params.mlp_epochs, seed, params.mlp_lr);
    }
    raise(ErrorCode::InvalidArgument, "unknown model kind");
}

namespace {

ordered_json tree_node_to_json(const TreeNode& node) {
    ordered_json j;
    j["counts"] = {node.class_counts[0], node.class_counts[1]};
    j["entropy_bits"] = node.entropy_bits;
    if (!node.is_leaf()) {
        j["feature"] = node.feature;
        j["threshold"] = node.threshold;
        j["left"] = tree_node_to_json(*node.left);
        j["right"] = tree_node_to_json(*node.right);
    }
    return j;
}

std::unique_ptr<TreeNode> tree_node_from_json(const ordered_json& j) {
    auto node = std::make_unique<TreeNode>();
    node->class_counts[0] = j.at("counts").at(0).get<std::size_t>();
    node->class_counts[1] = j.at("counts").at(1).get<std::size_t>();
    node->entropy_bits = j.at("entropy_bits").get<double>();
    if (j.contains("feature")) {
        node->feature = j.at("feature").get<int>();
        node->threshold = j.at("threshold").get<double>();
        node->left = tree_node_from_json(j.at("left"));
        node->right = tree_node_from_json(j.at("right"));
    }
    return node;
}

ordered_json model_to_json(const TrainedModel& model) {
    ordered_json j;
    switch (model.kind()) {
        case ModelKind::Tree: {
            const auto& m = dynamic_cast<const DecisionTreeModel&>(*model.impl);
            j["root"] = tree_node_to_json(m.root());
            break;
        }
        case ModelKind::Knn: {
            const auto& m = dynamic_cast<const KnnModel&>(*model.impl);
            j["k"] = m.k();
            j["x"] = m.training_set().x;
            j["y"] = m.training_set().y;
            break;
        }
        case ModelKind::Logistic: {
            const auto& m = dynamic_cast<const LogisticModel&>(*model.impl);
            j["w"] = m.weights();
            j["b"] = m.bias();
            break;
        }
        case ModelKind::Gp: {
            const auto& m = dynamic_cast<const GpModel&>(*model.impl);
            j["x"] = m.training_inputs();
            j["grad_at_mode"] = m.grad_at_mode();
            j["sqrt_w"] = m.sqrt_w();
            j["chol_lower"] = m.chol_lower();
            j["length_scale"] = m.config().length_scale;
            j["variance"] = m.config().variance;
            j["jitter"] = m.config().jitter;
            break;
        }
        case ModelKind::Gboost: {
            const auto& m = dynamic_cast<const GboostModel&>(*model.impl);
            j["base_score"] = m.base_score();
            j["learning_rate"] = m.learning_rate();
            ordered_json trees = ordered_json::array();
            for (const auto& tree : m.trees()) {
                ordered_json nodes = ordered_json::array();
                for (const auto& n : tree.nodes) {
                    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
                }
                trees.push_back(std::move(nodes));
            }
            j["trees"] = std::move(trees);
            break;
        }
        case ModelKind::Mlp: {
            const auto& m = dynamic_cast<const MlpModel&>(*model.impl);
            j["hidden"] = m.hidden();
            j["params"] = m.params();
            break;
        }
    }
    return j;
}

TrainedModel model_from_json(ModelKind kind, const ordered_json& j) {
    switch (kind) {
        case ModelKind::Tree:
            return TrainedModel{std::make_shared<DecisionTreeModel>(tree_node_from_json(j.at("root")))};
        case ModelKind::Knn: {
            LabeledSet train;
            train.x = j.at("x").get<std::vector<std::vector<double>>>();
            train.y = j.at("y").get<std::vector<int>>();
            return TrainedModel{std::make_shared<KnnModel>(std::move(train), j.at("k").get<int>())};
        }
        case ModelKind::Logistic:
            return TrainedModel{std::make_shared<LogisticModel>(
                j.at("w").get<std::vector<double>>(), j.at("b").get<double>())};
        case ModelKind::Gp: {
            GpConfig config;
            config.length_scale = j.at("length_scale").get<double>();
            config.variance = j.at("variance").get<double>();
            config.jitter = j.at("jitter").get<double>();
            return TrainedModel{std::make_shared<GpModel>(
                j.at("x").get<std::vector<std::vector<double>>>(),
                j.at("grad_at_mode").get<std::vector<double>>(),
                j.at("sqrt_w").get<std::vector<double>>(),
                j.at("chol_lower").get<std::vector<double>>(), config)};
        }
        case ModelKind::Gboost: {
            std::vector<BoostStump> trees;
            for (const auto& tj : j.at("trees")) {
                BoostStump stump;
                for (const auto& nj : tj) {
                    BoostStump::Node n;
                    n.feature = nj.at(0).get<int>();
                    n.threshold = nj.at(1).get<double>();
                    n.left = nj.at(2).get<int>();
                    n.right = nj.at(3).get<int>();
                    n.value = nj.at(4).get<double>();
                    stump.nodes.push_back(n);
                }
                trees.push_back(std::move(stump));
            }
            return TrainedModel{std::make_shared<GboostModel>(j.at("base_score").get<double>(),
                                                              j.at("learning_rate").get<double>(),
                                                              std::move(trees))};
        }
        case ModelKind::Mlp:
            return TrainedModel{std::make_shared<MlpModel>(
                j.at("hidden").get<int>(), j.at("params").get<std::vector<double>>())};
    }
    raise(ErrorCode::InvalidArgument, "unknown model kind");
}

ordered_json norm_stats_to_json(const NormStats& stats) {
    ordered_json j;
    const char* names[2] = {"male", "female"};
    for (int g = 0; g < 2; ++g) {
        if (stats.per_gender[g].empty()) {
            j[names[g]] = nullptr;
            continue;
        }
        ordered_json arr = ordered_json::array();
        for (const auto& pf : stats.per_gender[g]) {
            arr.push_back({{"mean", pf.mean}, {"std", pf.std}, {"degenerate", pf.degenerate}});
        }
        j[names[g]] = std::move(arr);
    }
    return j;
}

NormStats norm_stats_from_json(const ordered_json& j) {
    NormStats stats;
    const char* names[2] = {"male", "female"};
    for (int g = 0; g < 2; ++g) {
        const auto& entry = j.at(names[g]);
        if (entry.is_null()) continue;
        for (const auto& pj : entry) {
            NormStats::PerFeature pf;
            pf.mean = pj.at("mean").get<double>();
            pf.std = pj.at("std").get<double>();
            pf.degenerate = pj.at("degenerate").get<bool>();
            stats.per_gender[g].push_back(pf);
        }
    }
    return stats;
}

}  // namespace

std::string bundle_to_json(const ModelBundle& bundle) {
    ordered_json j;
    j["schema"] = 1;
    j["kind"] = to_string(bundle.model.kind());
    j["feature_subset"] = bundle.feature_subset;
    ordered_json names = ordered_json::array();
    for (std::size_t c : bundle.feature_subset) names.push_back(kFeatureNames.at(c));
    j["feature_names"] = std::move(names);
    j["norm_stats"] = norm_stats_to_json(bundle.norm);
    if (bundle.gender.trained()) {
        j["gender_classifier"] = {{"w", bundle.gender.weights()}, {"b", bundle.gender.bias()}};
    } else {
        j["gender_classifier"] = nullptr;
    }
    j["model"] = model_to_json(bundle.model);
    return j.dump(2) + "\n";
}

ModelBundle bundle_from_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        raise(ErrorCode::InvalidArgument, std::string("bad model JSON: ") + e.what());
    }
    if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
        raise(ErrorCode::InvalidArgument, "unsupported model schema");
    }
    ModelBundle bundle;
    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    bundle.model = model_from_json(kind, j.at("model"));
    bundle.norm = norm_stats_from_json(j.at("norm_stats"));
    bundle.feature_subset = j.at("feature_subset").get<std::vector<std::size_t>>();
    const auto& gj = j.at("gender_classifier");
    if (!gj.is_null()) {
        bundle.gender =
            GenderClassifier(gj.at("w").get<std::vector<double>>(), gj.at("b").get<double>());
    }
    return bundle;
}

}  // namespace vox
