#include <algorithm>
#include <cmath>
#include <numeric>

#include "vox/errors.hpp"
#include "vox/eval.hpp"
#include "vox/parallel.hpp"
#include "vox/stats.hpp"

namespace vox {

namespace {

struct ColumnBounds {
    std::array<double, kFeatureCount> lo{}, hi{};
    std::array<bool, kFeatureCount> active{};
};

// Winsorization bounds (population std, strict > k*std rule) fitted on the
// given rows only; applying them to held-out rows keeps folds leakage-safe.
ColumnBounds winsor_bounds(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows,
                           double k) {
    ColumnBounds bounds;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t r : rows) {
            if (matrix.rows[r].missing[c]) continue;
            sum += matrix.rows[r].values[c];
            ++n;
        }
        if (n == 0) continue;
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t r : rows) {
            if (matrix.rows[r].missing[c]) continue;
            ss += (matrix.rows[r].values[c] - mean) * (matrix.rows[r].values[c] - mean);
        }
        const double sd = std::sqrt(ss / n);
        if (sd == 0.0) continue;
        bounds.lo[c] = mean - k * sd;
        bounds.hi[c] = mean + k * sd;
        bounds.active[c] = true;
    }
    return bounds;
}

void apply_winsor(FeatureMatrix& matrix, const ColumnBounds& bounds) {
    for (auto& row : matrix.rows) {
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            if (!bounds.active[c] || row.missing[c]) continue;
            row.values[c] = std::clamp(row.values[c], bounds.lo[c], bounds.hi[c]);
        }
    }
}

LabeledSet build_set(const FeatureMatrix& matrix, const std::vector<int>& labels,
                     const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& feature_subset) {
    LabeledSet set;
    set.x.reserve(rows.size());
    set.y.reserve(rows.size());
    for (std::size_t r : rows) {
        std::vector<double> x;
        x.reserve(feature_subset.size());
        for (std::size_t c : feature_subset) x.push_back(matrix.rows[r].values[c]);
        set.x.push_back(std::move(x));
        set.y.push_back(labels[r]);
    }
    return set;
}

std::vector<std::size_t> all_features() {
    std::vector<std::size_t> v(kFeatureCount);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

struct FoldOutput {
    Metrics metrics;
    std::vector<std::size_t> test_rows;
    std::vector<double> scores;
    bool has_metrics = false;
};

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (v.size() - 1));
}

}  // namespace

std::vector<int> sa_labels(const FeatureMatrix& matrix) {
    std::vector<int> labels(matrix.rows.size());
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        switch (matrix.rows[i].sa_group) {
            case SAGroup::HSA: labels[i] = 1; break;
            case SAGroup::LSA: labels[i] = 0; break;
            default: labels[i] = -1; break;
        }
    }
    return labels;
}

void drop_unlabeled(FeatureMatrix& matrix, std::vector<int>& labels) {
    FeatureMatrix kept;
    std::vector<int> kept_labels;
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        if (labels[i] < 0) continue;
        kept.rows.push_back(std::move(matrix.rows[i]));
        kept_labels.push_back(labels[i]);
    }
    matrix = std::move(kept);
    labels = std::move(kept_labels);
}

namespace detail {

// Shared fold loop.  rank_top_k == 0 trains on the full subset; otherwise
// the training fold is re-ranked by ANOVA F and restricted to its top k
// features (whole-data ranking under paper fidelity).
CvResult run_cv(const FeatureMatrix& matrix, const std::vector<int>& labels, ModelKind kind,
                const LearnParams& params, const FoldPlan& plan, const CvOptions& options,
                int rank_top_k) {
    const std::size_t n = matrix.rows.size();
    if (plan.assignment.size() != n) raise(ErrorCode::LengthMismatch, "fold plan vs matrix");

    std::vector<std::size_t> base_features =
        options.feature_subset.empty() ? all_features() : options.feature_subset;
    std::sort(base_features.begin(), base_features.end());

    // Whole-data ranking for paper-fidelity sweeps, computed once.
    std::vector<std::size_t> fidelity_ranked;
    if (rank_top_k > 0 && options.paper_fidelity) {
        std::vector<std::size_t> all_rows(n);
        std::iota(all_rows.begin(), all_rows.end(), 0);
        FeatureMatrix whole = matrix;
        apply_winsor(whole, winsor_bounds(whole, all_rows, options.outlier_k));
        whole = normalize(whole, fit_norm_stats(whole, all_rows));
        const FeatureRanking ranking = rank_features_anova(whole, labels);
        for (const auto& [feature, f] : ranking.ranked) fidelity_ranked.push_back(feature);
    }

    std::vector<FoldOutput> outputs(static_cast<std::size_t>(plan.k));
    std::vector<std::string> warnings(static_cast<std::size_t>(plan.k));

    parallel_for(static_cast<std::size_t>(plan.k), options.jobs, [&](std::size_t fold) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t r = 0; r < n; ++r) {
            (plan.assignment[r] == static_cast<int>(fold) ? test_rows : train_rows).push_back(r);
        }
        if (test_rows.empty()) return;
        bool both = false, any0 = false, any1 = false;
        for (std::size_t r : train_rows) {
            (labels[r] ? any1 : any0) = true;
        }
        both = any0 && any1;
        if (!both) {
            warnings[fold] = "fold " + std::to_string(fold) + ": single-class training set";
            return;
        }

        std::vector<std::size_t> fidelity_rows;
        if (options.paper_fidelity) {
            fidelity_rows.resize(n);
            std::iota(fidelity_rows.begin(), fidelity_rows.end(), 0);
        }
        const std::vector<std::size_t>& stat_rows =
            options.paper_fidelity ? fidelity_rows : train_rows;

        FeatureMatrix work = matrix;
        apply_winsor(work, winsor_bounds(work, stat_rows, options.outlier_k));
        work = normalize(work, fit_norm_stats(work, stat_rows));

        std::vector<std::size_t> features = base_features;
        if (rank_top_k > 0) {
            std::vector<std::size_t> ranked;
            if (options.paper_fidelity) {
                ranked = fidelity_ranked;
            } else {
                FeatureMatrix train_only;
                std::vector<int> train_labels;
                for (std::size_t r : train_rows) {
                    train_only.rows.push_back(work.rows[r]);
                    train_labels.push_back(labels[r]);
                }
                const FeatureRanking ranking = rank_features_anova(train_only, train_labels);
                for (const auto& [feature, f] : ranking.ranked) ranked.push_back(feature);
            }
            ranked.resize(std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(rank_top_k)));
            std::sort(ranked.begin(), ranked.end());  // canonical column order
            features = std::move(ranked);
        }

        const LabeledSet train_set = build_set(work, labels, train_rows, features);
        const TrainedModel model =
            train_model(kind, train_set, params, options.seed + fold);

        FoldOutput& out = outputs[fold];
        out.test_rows = test_rows;
        out.scores.reserve(test_rows.size());
        std::vector<int> predicted, actual;
        for (std::size_t r : test_rows) {
            std::vector<double> x;
            x.reserve(features.size());
            for (std::size_t c : features) x.push_back(work.rows[r].values[c]);
            const double score = model.predict_proba(x);
            out.scores.push_back(score);
            predicted.push_back(score >= 0.5 ? 1 : 0);
            actual.push_back(labels[r]);
        }
        out.metrics = compute_metrics(predicted, actual);
        out.has_metrics = true;
    });

    CvResult result;
    std::vector<double> accs, precs, recalls;
    std::vector<double> pooled_scores;
    std::vector<int> pooled_labels;
    for (const auto& out : outputs) {
        if (!out.has_metrics) continue;
        result.fold_metrics.push_back(out.metrics);
        accs.push_back(out.metrics.accuracy);
        if (out.metrics.precision) precs.push_back(*out.metrics.precision);
        recalls.push_back(out.metrics.recall);
        for (std::size_t i = 0; i < out.test_rows.size(); ++i) {
            pooled_scores.push_back(out.scores[i]);
            pooled_labels.push_back(labels[out.test_rows[i]]);
        }
    }
    for (auto& w : warnings) {
        if (!w.empty()) result.warnings.push_back(w);
    }
    if (accs.empty()) raise(ErrorCode::TooFewGroups, "no fold produced metrics");

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    result.aggregate.mean_accuracy = mean_of(accs);
    result.aggregate.std_accuracy = sample_std(accs, result.aggregate.mean_accuracy);
    result.aggregate.mean_recall = mean_of(recalls);
    result.aggregate.std_recall = sample_std(recalls, result.aggregate.mean_recall);
    result.aggregate.precision_defined_folds = static_cast<int>(precs.size());
    if (!precs.empty()) {
        result.aggregate.mean_precision = mean_of(precs);
        result.aggregate.std_precision = sample_std(precs, *result.aggregate.mean_precision);
    }
    if (static_cast<int>(precs.size()) < static_cast<int>(accs.size())) {
        result.warnings.push_back(
            std::to_string(accs.size() - precs.size()) +
            " fold(s) made no positive predictions; precision averaged over the rest");
    }
    result.pooled_roc = roc_auc(pooled_scores, pooled_labels);
    return result;
}

}  // namespace detail

CvResult cross_validate(const FeatureMatrix& matrix, const std::vector<int>& labels,
                        ModelKind kind, const LearnParams& params, const FoldPlan& plan,
                        const CvOptions& options) {
    return detail::run_cv(matrix, labels, kind, params, plan, options, 0);
}

SweepResult sweep_feature_count(const FeatureMatrix& matrix, const std::vector<int>& labels,
                                ModelKind kind, const LearnParams& params, const FoldPlan& plan,
                                const CvOptions& options) {
    SweepResult sweep;
    for (int k = 1; k <= static_cast<int>(kFeatureCount); ++k) {
        const CvResult res = detail::run_cv(matrix, labels, kind, params, plan, options, k);
        sweep.mean_accuracy.push_back(res.aggregate.mean_accuracy);
        sweep.std_accuracy.push_back(res.aggregate.std_accuracy);
    }
    // descriptive whole-data ranking for the report
    std::vector<std::size_t> all_rows(matrix.rows.size());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    FeatureMatrix whole = matrix;
    apply_winsor(whole, winsor_bounds(whole, all_rows, options.outlier_k));
    whole = normalize(whole, fit_norm_stats(whole, all_rows));
    const FeatureRanking ranking = rank_features_anova(whole, labels);
    for (const auto& [feature, f] : ranking.ranked) sweep.ranking.push_back(feature);
    return sweep;
}

}  // namespace vox
