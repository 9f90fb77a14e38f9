#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vox/learn.hpp"

namespace vox {

enum class FoldMode { PerRecording, PerSpeaker };

const char* to_string(FoldMode mode);

struct FoldPlan {
    int k = 10;
    FoldMode mode = FoldMode::PerSpeaker;
    bool stratified = true;
    std::uint64_t seed = 0;
    std::vector<int> assignment;  // row index -> fold index
};

// Deterministic stratified fold assignment.  PerSpeaker keeps all of a
// speaker's rows in one fold and balances speaker-level positives; the
// speaker's label is the majority of its rows (ties count positive).
// Throws TooFewGroups when k nonempty folds are impossible.
FoldPlan make_folds(const FeatureMatrix& matrix, const std::vector<int>& labels, int k,
                    FoldMode mode, bool stratified, std::uint64_t seed);

struct Metrics {
    double accuracy = 0.0;
    std::optional<double> precision;  // absent when there are no positive predictions
    double recall = 0.0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
};

Metrics compute_metrics(const std::vector<int>& predicted, const std::vector<int>& actual);

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr) from (0,0) to (1,1)
    double auc = 0.0;
};

// Threshold sweep over distinct scores, descending; tied scores advance as a
// single step (diagonal segment); AUC by the trapezoid rule.
// Throws SingleClass unless both classes appear.
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& actual);

struct AggregateMetrics {
    double mean_accuracy = 0.0, std_accuracy = 0.0;
    std::optional<double> mean_precision, std_precision;
    int precision_defined_folds = 0;
    double mean_recall = 0.0, std_recall = 0.0;
};

struct CvOptions {
    double outlier_k = 3.0;
    bool paper_fidelity = false;  // whole-data winsorize/normalize/rank
    std::uint64_t seed = 0;
    int jobs = 1;
    // canonical feature indices to keep (empty = all 18)
    std::vector<std::size_t> feature_subset;
};

struct CvResult {
    std::vector<Metrics> fold_metrics;
    AggregateMetrics aggregate;
    RocCurve pooled_roc;
    std::vector<std::string> warnings;
};

// Per fold: winsorize with training-fold bounds, fit gender NormStats on the
// training rows, normalize, train, score the held-out rows.  Aggregates are
// mean +/- sample std over folds; the ROC pools out-of-fold scores.
CvResult cross_validate(const FeatureMatrix& matrix, const std::vector<int>& labels,
                        ModelKind kind, const LearnParams& params, const FoldPlan& plan,
                        const CvOptions& options);

struct SweepResult {
    // one entry per feature count k = 1..18
    std::vector<double> mean_accuracy;
    std::vector<double> std_accuracy;
    // descriptive whole-data ranking (canonical indices, best first)
    std::vector<std::size_t> ranking;
};

// For k = 1..18 restrict to the top-k ANOVA-F-ranked features (ranked inside
// each training fold by default; whole-data under paper fidelity) and rerun
// the cross-validation.
SweepResult sweep_feature_count(const FeatureMatrix& matrix, const std::vector<int>& labels,
                                ModelKind kind, const LearnParams& params, const FoldPlan& plan,
                                const CvOptions& options);

struct TransferMatrix {
    // [train gender][test gender]; 0 = male, 1 = female.  Diagonals are the
    // gender-specific CV accuracies, off-diagonals train-on-A-test-on-B.
    double accuracy[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

struct GenderConfigResult {
    CvResult unified;
    CvResult male, female;
    TransferMatrix transfer;
};

GenderConfigResult gender_configurations(const FeatureMatrix& matrix,
                                         const std::vector<int>& labels, ModelKind kind,
                                         const LearnParams& params, const FoldPlan& plan,
                                         const CvOptions& options);

struct UtteranceSplitResult {
    CvResult refusal;
    CvResult consent;
};

// SA classification restricted to each utterance-type subset.
UtteranceSplitResult split_by_utterance_eval(const FeatureMatrix& matrix,
                                             const std::vector<int>& labels, ModelKind kind,
                                             const LearnParams& params, const FoldPlan& plan,
                                             const CvOptions& options);

// Refusal-vs-consent classification (positive = refusal) under the same
// cross-validation pipeline.  Throws MissingUtteranceLabels when fewer than
// two utterance types are labeled.
CvResult utterance_type_classification(const FeatureMatrix& matrix, ModelKind kind,
                                       const LearnParams& params, int k, FoldMode mode,
                                       bool stratified, const CvOptions& options,
                                       FoldPlan* plan_out = nullptr);

// SA labels (HSA = positive) for the matrix rows; Excluded rows get -1 and
// must be filtered out by the caller.
std::vector<int> sa_labels(const FeatureMatrix& matrix);

// Drops rows whose label is negative and returns the compacted matrix/labels.
void drop_unlabeled(FeatureMatrix& matrix, std::vector<int>& labels);

}  // namespace vox
