#include "vox/report.hpp"

#include <json.hpp>

#include "vox/io_util.hpp"

namespace vox {

using nlohmann::ordered_json;

namespace {

ordered_json metrics_json(const Metrics& m) {
    ordered_json j;
    j["accuracy"] = m.accuracy;
    if (m.precision) j["precision"] = *m.precision;
    else j["precision"] = nullptr;
    j["recall"] = m.recall;
    j["confusion"] = {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}};
    return j;
}

ordered_json aggregate_json(const AggregateMetrics& a) {
    ordered_json j;
    j["mean_accuracy"] = a.mean_accuracy;
    j["std_accuracy"] = a.std_accuracy;
    if (a.mean_precision) {
        j["mean_precision"] = *a.mean_precision;
        j["std_precision"] = *a.std_precision;
    } else {
        j["mean_precision"] = nullptr;
        j["std_precision"] = nullptr;
    }
    j["precision_defined_folds"] = a.precision_defined_folds;
    j["mean_recall"] = a.mean_recall;
    j["std_recall"] = a.std_recall;
    return j;
}

ordered_json roc_json(const RocCurve& curve) {
    ordered_json points = ordered_json::array();
    for (const auto& [fpr, tpr] : curve.points) points.push_back({fpr, tpr});
    return points;
}

ordered_json cv_result_json(const CvResult& r) {
    ordered_json j;
    ordered_json folds = ordered_json::array();
    for (const auto& m : r.fold_metrics) folds.push_back(metrics_json(m));
    j["folds"] = std::move(folds);
    j["aggregate"] = aggregate_json(r.aggregate);
    j["roc"] = roc_json(r.pooled_roc);
    j["auc"] = r.pooled_roc.auc;
    j["warnings"] = r.warnings;
    return j;
}

ordered_json plan_json(const FoldPlan& plan) {
    ordered_json j;
    j["k"] = plan.k;
    j["mode"] = to_string(plan.mode);
    j["stratified"] = plan.stratified;
    j["seed"] = plan.seed;
    std::vector<int> sizes(static_cast<std::size_t>(plan.k), 0);
    for (int f : plan.assignment) ++sizes[static_cast<std::size_t>(f)];
    j["fold_sizes"] = sizes;
    return j;
}

ordered_json report_head(const RunConfig& config, const std::string& command) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["seed"] = config.seed;
    j["config"] = ordered_json::parse(config_to_json(config));
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string cv_report_json(const RunConfig& config, const std::string& command,
                           const FoldPlan& plan, const std::vector<NamedCvResult>& models) {
    ordered_json j = report_head(config, command);
    j["fold_plan"] = plan_json(plan);
    ordered_json mj;
    for (const auto& nm : models) mj[nm.name] = cv_result_json(nm.result);
    j["models"] = std::move(mj);
    return dump(j);
}

std::string sweep_report_json(const RunConfig& config, const FoldPlan& plan,
                              const std::string& model, const SweepResult& sweep) {
    ordered_json j = report_head(config, "sweep");
    j["fold_plan"] = plan_json(plan);
    j["model"] = model;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < sweep.mean_accuracy.size(); ++i) {
        rows.push_back({i + 1, sweep.mean_accuracy[i], sweep.std_accuracy[i]});
    }
    j["sweep"] = std::move(rows);
    ordered_json ranking = ordered_json::array();
    for (std::size_t c : sweep.ranking) ranking.push_back(kFeatureNames.at(c));
    j["ranking"] = std::move(ranking);
    return dump(j);
}

std::string transfer_report_json(const RunConfig& config, const FoldPlan& plan,
                                 const std::string& model, const GenderConfigResult& result) {
    ordered_json j = report_head(config, "transfer");
    j["fold_plan"] = plan_json(plan);
    j["model"] = model;
    j["unified"] = cv_result_json(result.unified);
    j["male"] = cv_result_json(result.male);
    j["female"] = cv_result_json(result.female);
    j["transfer"] = {{result.transfer.accuracy[0][0], result.transfer.accuracy[0][1]},
                     {result.transfer.accuracy[1][0], result.transfer.accuracy[1][1]}};
    return dump(j);
}

std::string stats_report_json(const RunConfig& config, const std::vector<StatsRecord>& records) {
    ordered_json j = report_head(config, "stats");
    ordered_json arr = ordered_json::array();
    for (const auto& r : records) {
        ordered_json rec;
        rec["feature"] = r.feature;
        rec["comparison"] = r.comparison;
        rec["kind"] = r.kind;
        rec[r.kind == "anova" ? "F" : "t"] = r.statistic;
        rec["effect_size"] = r.effect_size;
        rec["p"] = r.p_value;
        if (r.kind == "anova") {
            rec["df"] = {r.df1, r.df2};
        } else {
            rec["df"] = r.df1;
        }
        arr.push_back(std::move(rec));
    }
    j["records"] = std::move(arr);
    return dump(j);
}

std::string roc_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points) {
        out += format_double(fpr, 6);
        out += ',';
        out += format_double(tpr, 6);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::string out = "k,mean_accuracy,std_accuracy\n";
    for (std::size_t i = 0; i < sweep.mean_accuracy.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(sweep.mean_accuracy[i], 6);
        out += ',';
        out += format_double(sweep.std_accuracy[i], 6);
        out += '\n';
    }
    return out;
}

std::string transfer_csv(const TransferMatrix& transfer) {
    std::string out = "train_gender,test_gender,accuracy\n";
    const char* names[2] = {"male", "female"};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            out += names[a];
            out += ',';
            out += names[b];
            out += ',';
            out += format_double(transfer.accuracy[a][b], 6);
            out += '\n';
        }
    }
    return out;
}

std::string extraction_warnings_text(const ExtractionResult& extraction) {
    std::string out;
    for (const auto& r : extraction.rejections) {
        out += r.recording_id;
        out += ": ";
        out += r.reason;
        out += '\n';
    }
    return out;
}

}  // namespace vox
