#include <algorithm>
#include <numeric>

#include "vox/errors.hpp"
#include "vox/eval.hpp"

namespace vox {

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& actual) {
    if (scores.size() != actual.size()) raise(ErrorCode::LengthMismatch, "scores vs labels");
    long total_pos = 0, total_neg = 0;
    for (int a : actual) (a ? total_pos : total_neg) += 1;
    if (total_pos == 0 || total_neg == 0) {
        raise(ErrorCode::SingleClass, "ROC needs both classes");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // process every instance sharing this score as one threshold step
        const double s = scores[order[i]];
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == s) {
            (actual[order[j]] ? tp : fp) += 1;
            ++j;
        }
        curve.points.emplace_back(static_cast<double>(fp) / total_neg,
                                  static_cast<double>(tp) / total_pos);
        i = j;
    }

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& [x0, y0] = curve.points[p - 1];
        const auto& [x1, y1] = curve.points[p];
        auc += (x1 - x0) * (y0 + y1) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

}  // namespace vox
