#include "fsbench/metrics.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace fsbench {

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size())
        throw Error("LengthMismatch", "confusion: y_true and y_pred lengths differ");
    ConfusionMatrix cm;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            (y_pred[i] == 1 ? cm.tp : cm.fn)++;
        else
            (y_pred[i] == 1 ? cm.fp : cm.tn)++;
    }
    return cm;
}

namespace {

double ratio_or_zero(double num, double den, const char* what) {
    if (den == 0.0) {
        if (num != 0.0) return 0.0; // cannot happen for count ratios, kept for safety
        log::debug(std::string(what) + ": 0/0 defined to 0");
        return 0.0;
    }
    return num / den;
}

} // namespace

MetricSet metrics_from_confusion(const ConfusionMatrix& cm) {
    MetricSet m;
    const double tp = static_cast<double>(cm.tp);
    const double tn = static_cast<double>(cm.tn);
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);

    m.accuracy = ratio_or_zero(tp + tn, tp + tn + fp + fn, "accuracy");
    m.precision = ratio_or_zero(tp, tp + fp, "precision");
    m.recall = ratio_or_zero(tp, tp + fn, "recall");
    m.f1 = ratio_or_zero(2.0 * m.precision * m.recall, m.precision + m.recall, "f1");

    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) {
        log::debug("mcc: degenerate confusion matrix, defined to 0");
        m.mcc = 0.0;
    } else {
        m.mcc = (tp * tn - fp * fn) / std::sqrt(denom);
    }
    return m;
}

double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size())
        throw Error("LengthMismatch", "roc_auc: lengths differ");
    long n_pos = 0, n_neg = 0;
    for (int y : y_true) (y == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw SingleClass("roc_auc needs both classes");

    // Midrank formulation: AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos n_neg),
    // which equals the pair-counting definition with half credit for ties.
    std::vector<size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (size_t k = i; k <= j; ++k)
            if (y_true[order[k]] == 1) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

} // namespace fsbench
