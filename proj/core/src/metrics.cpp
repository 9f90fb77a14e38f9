#include "vox/errors.hpp"
#include "vox/eval.hpp"

namespace vox {

Metrics compute_metrics(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size()) {
        raise(ErrorCode::LengthMismatch, "predicted vs actual labels");
    }
    if (predicted.empty()) raise(ErrorCode::LengthMismatch, "no predictions");

    Metrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] != 0;
        const bool a = actual[i] != 0;
        if (p && a) ++m.tp;
        else if (p && !a) ++m.fp;
        else if (!p && a) ++m.fn;
        else ++m.tn;
    }
    const double n = static_cast<double>(predicted.size());
    m.accuracy = static_cast<double>(m.tp + m.tn) / n;
    if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    m.recall = (m.tp + m.fn > 0) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    return m;
}

}  // namespace vox
