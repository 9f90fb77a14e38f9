#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vox/features.hpp"

namespace vox {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation,
// absolute tolerance 1e-12.  Exposed because the p-value oracles in the
// test suite cross-check it by quadrature.
double regularized_incomplete_beta(double a, double b, double x);

// Upper-tail probabilities of the F and Student-t distributions.
double f_sf(double f, double df1, double df2);
double t_two_sided_p(double t, double df);

struct AnovaResult {
    double f_value = 0.0;
    double eta_squared = 0.0;
    double p_value = 1.0;
    int df_between = 0;
    int df_within = 0;
};

struct PairedTResult {
    double t_value = 0.0;
    double cohens_d = 0.0;
    double p_value = 1.0;
    int df = 0;
};

struct FeatureRanking {
    // (feature index, F value), descending by F, ties broken by canonical
    // feature order.
    std::vector<std::pair<std::size_t, double>> ranked;
};

// One-way ANOVA.  Needs >= 2 groups of >= 2 values each.  A fully
// degenerate input (zero between- and within-group variance) yields F = 0
// rather than an error.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

// Paired t-test with Cohen's d = mean(diff) / std(diff) (sample std).
// All-equal nonzero differences throw ZeroVariance; identical samples give
// the no-effect result (t = 0, d = 0, p = 1).
PairedTResult paired_t(const std::vector<double>& a, const std::vector<double>& b);

// Per-feature two-group ANOVA F, descending.  Missing cells are skipped;
// features without two populated groups get F = 0.
FeatureRanking rank_features_anova(const FeatureMatrix& matrix,
                                   const std::vector<int>& labels);

}  // namespace vox
