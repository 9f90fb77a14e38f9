#pragma once

#include <string>
#include <vector>

#include "vox/config.hpp"
#include "vox/eval.hpp"
#include "vox/pipeline.hpp"

namespace vox {

struct NamedCvResult {
    std::string name;
    CvResult result;
};

// report.json bodies.  Every report embeds the schema version, the command,
// the seed, and the full resolved config, so re-running the embedded config
// reproduces the file byte for byte.
std::string cv_report_json(const RunConfig& config, const std::string& command,
                           const FoldPlan& plan, const std::vector<NamedCvResult>& models);
std::string sweep_report_json(const RunConfig& config, const FoldPlan& plan,
                              const std::string& model, const SweepResult& sweep);
std::string transfer_report_json(const RunConfig& config, const FoldPlan& plan,
                                 const std::string& model, const GenderConfigResult& result);

struct StatsRecord {
    std::string feature;
    std::string comparison;  // e.g. "LSA_vs_HSA" or "refusal_vs_consent"
    std::string kind;        // "anova" or "paired_t"
    double statistic = 0.0;  // F or t
    double effect_size = 0.0;  // eta^2 or Cohen's d
    double p_value = 1.0;
    int df1 = 0;
    int df2 = 0;  // 0 for t-tests
};

std::string stats_report_json(const RunConfig& config, const std::vector<StatsRecord>& records);

// plot-data CSVs
std::string roc_csv(const RocCurve& curve);
std::string sweep_csv(const SweepResult& sweep);
std::string transfer_csv(const TransferMatrix& transfer);

std::string extraction_warnings_text(const ExtractionResult& extraction);

}  // namespace vox
