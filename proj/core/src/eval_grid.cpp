#include <algorithm>
#include <cmath>
#include <numeric>

#include "vox/errors.hpp"
#include "vox/eval.hpp"
#include "vox/rng.hpp"
#include "vox/stats.hpp"

namespace vox {

namespace {

struct Subset {
    FeatureMatrix matrix;
    std::vector<int> labels;
};

Subset take_rows(const FeatureMatrix& matrix, const std::vector<int>& labels,
                 const std::vector<std::size_t>& rows) {
    Subset s;
    for (std::size_t r : rows) {
        s.matrix.rows.push_back(matrix.rows[r]);
        s.labels.push_back(labels[r]);
    }
    return s;
}

// Winsorize + per-gender z-normalization fitted on this matrix's own rows.
FeatureMatrix fit_and_normalize(const FeatureMatrix& matrix, double outlier_k) {
    std::vector<std::size_t> rows(matrix.rows.size());
    std::iota(rows.begin(), rows.end(), 0);
    FeatureMatrix out = apply_outlier_policy(matrix, outlier_k, OutlierMode::Clip);
    return normalize(out, fit_norm_stats(out, rows));
}

LabeledSet to_labeled_set(const FeatureMatrix& matrix, const std::vector<int>& labels) {
    LabeledSet set;
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        set.x.emplace_back(matrix.rows[r].values.begin(), matrix.rows[r].values.end());
        set.y.push_back(labels[r]);
    }
    return set;
}

}  // namespace

GenderConfigResult gender_configurations(const FeatureMatrix& matrix,
                                         const std::vector<int>& labels, ModelKind kind,
                                         const LearnParams& params, const FoldPlan& plan,
                                         const CvOptions& options) {
    GenderConfigResult result;
    result.unified = cross_validate(matrix, labels, kind, params, plan, options);

    Rng seeder(options.seed);
    for (int g = 0; g < 2; ++g) {
        const Gender gender = g == 0 ? Gender::Male : Gender::Female;
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
            if (matrix.rows[r].meta.gender == gender) rows.push_back(r);
        }
        if (rows.size() < static_cast<std::size_t>(plan.k)) {
            raise(ErrorCode::TooFewGroups,
                  std::string(to_string(gender)) + " subset too small for " +
                      std::to_string(plan.k) + " folds");
        }
        Subset subset = take_rows(matrix, labels, rows);
        const std::uint64_t sub_seed = seeder.fork(static_cast<std::uint64_t>(g + 1)).seed();
        const FoldPlan sub_plan = make_folds(subset.matrix, subset.labels, plan.k, plan.mode,
                                             plan.stratified, sub_seed);
        CvOptions sub_options = options;
        sub_options.seed = sub_seed;
        CvResult res = cross_validate(subset.matrix, subset.labels, kind, params, sub_plan,
                                      sub_options);
        result.transfer.accuracy[g][g] = res.aggregate.mean_accuracy;
        (g == 0 ? result.male : result.female) = std::move(res);
    }

    // Cross-gender transfer: train on everything of gender A (normalized by
    // A's stats), test on everything of gender B normalized by B's own stats.
    FeatureMatrix normalized[2];
    std::vector<int> sub_labels[2];
    for (int g = 0; g < 2; ++g) {
        const Gender gender = g == 0 ? Gender::Male : Gender::Female;
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
            if (matrix.rows[r].meta.gender == gender) rows.push_back(r);
        }
        Subset subset = take_rows(matrix, labels, rows);
        normalized[g] = fit_and_normalize(subset.matrix, options.outlier_k);
        sub_labels[g] = subset.labels;
    }
    for (int train_g = 0; train_g < 2; ++train_g) {
        const int test_g = 1 - train_g;
        const LabeledSet train_set = to_labeled_set(normalized[train_g], sub_labels[train_g]);
        const TrainedModel model = train_model(kind, train_set, params, options.seed);
        std::vector<int> predicted, actual;
        for (std::size_t r = 0; r < normalized[test_g].rows.size(); ++r) {
            std::vector<double> x(normalized[test_g].rows[r].values.begin(),
                                  normalized[test_g].rows[r].values.end());
            predicted.push_back(model.predict_label(x));
            actual.push_back(sub_labels[test_g][r]);
        }
        result.transfer.accuracy[train_g][test_g] = compute_metrics(predicted, actual).accuracy;
    }
    return result;
}

UtteranceSplitResult split_by_utterance_eval(const FeatureMatrix& matrix,
                                             const std::vector<int>& labels, ModelKind kind,
                                             const LearnParams& params, const FoldPlan& plan,
                                             const CvOptions& options) {
    UtteranceSplitResult result;
    Rng seeder(options.seed);
    for (int pass = 0; pass < 2; ++pass) {
        const UtteranceType type = pass == 0 ? UtteranceType::Refusal : UtteranceType::Consent;
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
            if (matrix.rows[r].meta.utterance_type == type) rows.push_back(r);
        }
        if (rows.empty()) {
            raise(ErrorCode::MissingUtteranceLabels,
                  std::string("no ") + to_string(type) + " rows");
        }
        Subset subset = take_rows(matrix, labels, rows);
        const std::uint64_t sub_seed = seeder.fork(static_cast<std::uint64_t>(pass + 11)).seed();
        const FoldPlan sub_plan = make_folds(subset.matrix, subset.labels, plan.k, plan.mode,
                                             plan.stratified, sub_seed);
        CvOptions sub_options = options;
        sub_options.seed = sub_seed;
        CvResult res =
            cross_validate(subset.matrix, subset.labels, kind, params, sub_plan, sub_options);
        (pass == 0 ? result.refusal : result.consent) = std::move(res);
    }
    return result;
}

CvResult utterance_type_classification(const FeatureMatrix& matrix, ModelKind kind,
                                       const LearnParams& params, int k, FoldMode mode,
                                       bool stratified, const CvOptions& options,
                                       FoldPlan* plan_out) {
    FeatureMatrix labeled;
    std::vector<int> labels;
    std::size_t skipped = 0;
    for (const auto& row : matrix.rows) {
        switch (row.meta.utterance_type) {
            case UtteranceType::Refusal:
                labeled.rows.push_back(row);
                labels.push_back(1);
                break;
            case UtteranceType::Consent:
                labeled.rows.push_back(row);
                labels.push_back(0);
                break;
            default:
                ++skipped;
                break;
        }
    }
    bool has0 = false, has1 = false;
    for (int y : labels) (y ? has1 : has0) = true;
    if (!has0 || !has1) {
        raise(ErrorCode::MissingUtteranceLabels,
              "utterance-type classification needs both refusal and consent rows");
    }
    const FoldPlan plan = make_folds(labeled, labels, k, mode, stratified, options.seed);
    if (plan_out) *plan_out = plan;
    CvResult result = cross_validate(labeled, labels, kind, params, plan, options);
    if (skipped > 0) {
        result.warnings.push_back(std::to_string(skipped) +
                                  " row(s) with unknown utterance type skipped");
    }
    return result;
}

}  // namespace vox
