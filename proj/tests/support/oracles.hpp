#pragma once

// Independent numeric oracles used by the test suites.  Everything here is
// deliberately implemented by a different route than the library code it
// checks (quadrature instead of continued fractions, repeated argmin instead
// of sorting) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Composite Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Beta function via the sin^2 substitution: both endpoints become smooth
// even for half-integer parameters.
inline double beta_fn(double a, double b) {
    return simpson(
        [a, b](double theta) {
            return 2.0 * std::pow(std::sin(theta), 2.0 * a - 1.0) *
                   std::pow(std::cos(theta), 2.0 * b - 1.0);
        },
        1e-12, 1.5707963267948966 - 1e-12);
}

// Upper tail of the F distribution by direct density integration; the
// x = s^2 substitution removes the d1 = 1 singularity at the origin.
inline double f_upper_tail(double f, double d1, double d2) {
    if (f <= 0.0) return 1.0;
    const double c = std::pow(d1 / d2, d1 / 2.0) / beta_fn(d1 / 2.0, d2 / 2.0);
    const double cdf = simpson(
        [c, d1, d2](double s) {
            return 2.0 * c * std::pow(s, d1 - 1.0) *
                   std::pow(1.0 + d1 * s * s / d2, -(d1 + d2) / 2.0);
        },
        0.0, std::sqrt(f));
    return 1.0 - cdf;
}

// Two-sided Student-t p by direct density integration.
inline double t_two_sided(double t, double nu) {
    const double c = 1.0 / (std::sqrt(nu) * beta_fn(0.5, nu / 2.0));
    const double half = simpson(
        [c, nu](double u) { return c * std::pow(1.0 + u * u / nu, -(nu + 1.0) / 2.0); }, 0.0,
        std::abs(t));
    return std::max(0.0, 1.0 - 2.0 * half);
}

// Pooled-variance two-sample t statistic (for the F = t^2 identity).
inline double pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto ss = [&](const std::vector<double>& v, double m) {
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return s;
    };
    const double ma = mean(a), mb = mean(b);
    const double sp2 = (ss(a, ma) + ss(b, mb)) / (a.size() + b.size() - 2.0);
    return (ma - mb) / std::sqrt(sp2 * (1.0 / a.size() + 1.0 / b.size()));
}

// k nearest neighbors by repeated argmin extraction (no sorting).
inline std::vector<std::size_t> knn_by_argmin(const std::vector<std::vector<double>>& train,
                                              const std::vector<double>& query, int k) {
    std::vector<double> d2(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < query.size(); ++c) {
            const double diff = train[i][c] - query[c];
            s += diff * diff;
        }
        d2[i] = s;
    }
    std::vector<bool> used(train.size(), false);
    std::vector<std::size_t> out;
    for (int j = 0; j < k; ++j) {
        std::size_t best = train.size();
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (used[i]) continue;
            if (best == train.size() || d2[i] < d2[best]) best = i;
        }
        used[best] = true;
        out.push_back(best);
    }
    return out;
}

// AUC as the concordant-pair statistic with half credit for score ties.
inline double auc_concordant(const std::vector<double>& scores, const std::vector<int>& labels) {
    double concordant = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) concordant += 1.0;
            else if (scores[i] == scores[j]) concordant += 0.5;
        }
    }
    return concordant / pairs;
}

// Full-signal autocorrelation argmax over a lag range (pitch-lag oracle).
inline long autocorr_peak_lag(const std::vector<double>& x, long lag_min, long lag_max) {
    long best = lag_min;
    double best_v = -1e300;
    for (long lag = lag_min; lag <= lag_max; ++lag) {
        double v = 0.0;
        for (std::size_t i = 0; i + lag < x.size(); ++i) v += x[i] * x[i + lag];
        if (v > best_v) {
            best_v = v;
            best = lag;
        }
    }
    return best;
}

}  // namespace oracle
