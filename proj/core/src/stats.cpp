#include "vox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vox/errors.hpp"

namespace vox {

namespace {

// Lentz's continued fraction for the incomplete beta (Numerical Recipes
// style), valid for x < (a+1)/(a+b+2); the symmetry identity covers the rest.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-14;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) raise(ErrorCode::InvalidArgument, "beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_sf(double f, double df1, double df2) {
    if (f <= 0.0) return 1.0;
    const double x = df2 / (df2 + df1 * f);
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x);
}

double t_two_sided_p(double t, double df) {
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) raise(ErrorCode::TooFewSamples, "need >= 2 groups");
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) raise(ErrorCode::TooFewSamples, "each group needs >= 2 values");
        total_n += g.size();
    }
    if (total_n <= groups.size()) raise(ErrorCode::TooFewSamples, "too few values overall");

    double grand_sum = 0.0;
    for (const auto& g : groups) {
        for (double x : g) grand_sum += x;
    }
    const double grand_mean = grand_sum / static_cast<double>(total_n);

    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& g : groups) {
        const double gm = mean_of(g);
        ss_between += static_cast<double>(g.size()) * (gm - grand_mean) * (gm - grand_mean);
        for (double x : g) ss_within += (x - gm) * (x - gm);
    }
    const double ss_total = ss_between + ss_within;

    AnovaResult res;
    res.df_between = static_cast<int>(groups.size()) - 1;
    res.df_within = static_cast<int>(total_n - groups.size());

    if (ss_total <= 0.0) {
        // all values identical in every group: no effect by definition
        return res;
    }
    res.eta_squared = ss_between / ss_total;
    if (ss_within <= 0.0) {
        // perfectly separated constant groups: infinite F, p -> 0
        res.f_value = std::numeric_limits<double>::infinity();
        res.p_value = 0.0;
        return res;
    }
    const double ms_between = ss_between / res.df_between;
    const double ms_within = ss_within / res.df_within;
    res.f_value = ms_between / ms_within;
    res.p_value = f_sf(res.f_value, res.df_between, res.df_within);
    return res;
}

PairedTResult paired_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) raise(ErrorCode::LengthMismatch, "paired samples differ in length");
    const std::size_t n = a.size();
    if (n < 2) raise(ErrorCode::TooFewSamples, "need >= 2 pairs");

    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    const double mean = mean_of(diff);
    double ss = 0.0;
    for (double d : diff) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1));

    PairedTResult res;
    res.df = static_cast<int>(n) - 1;
    if (sd == 0.0) {
        if (mean == 0.0) return res;  // identical samples: t = 0, d = 0, p = 1
        raise(ErrorCode::ZeroVariance, "all differences equal and nonzero");
    }
    res.t_value = mean / (sd / std::sqrt(static_cast<double>(n)));
    res.cohens_d = mean / sd;
    res.p_value = t_two_sided_p(res.t_value, static_cast<double>(res.df));
    return res;
}

FeatureRanking rank_features_anova(const FeatureMatrix& matrix, const std::vector<int>& labels) {
    if (labels.size() != matrix.rows.size()) {
        raise(ErrorCode::LengthMismatch, "labels do not match matrix rows");
    }
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += y ? 1 : 0;
    if (n_pos < 2 || labels.size() - n_pos < 2) {
        raise(ErrorCode::TooFewSamples, "need >= 2 rows per label for ranking");
    }
    FeatureRanking ranking;
    ranking.ranked.reserve(kFeatureCount);
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        std::vector<double> g0, g1;
        for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
            if (matrix.rows[r].missing[c]) continue;
            (labels[r] ? g1 : g0).push_back(matrix.rows[r].values[c]);
        }
        double f = 0.0;
        if (g0.size() >= 2 && g1.size() >= 2) {
            const AnovaResult res = anova_oneway({g0, g1});
            f = std::isfinite(res.f_value) ? res.f_value : 1e300;
        }
        ranking.ranked.emplace_back(c, f);
    }
    std::stable_sort(ranking.ranked.begin(), ranking.ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranking;
}

}  // namespace vox
