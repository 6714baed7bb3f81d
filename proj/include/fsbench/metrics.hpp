#pragma once

#include "fsbench/types.hpp"

#include <span>

namespace fsbench {

// Malware (label 1) is the positive class everywhere.
struct ConfusionMatrix {
    long tp = 0;
    long tn = 0;
    long fp = 0;
    long fn = 0;

    long total() const { return tp + tn + fp + fn; }
};

struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double roc_auc = 0.0;
    double mcc = 0.0;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

// Fills everything except roc_auc. Any 0/0 ratio defines to 0 (logged at
// debug level).
MetricSet metrics_from_confusion(const ConfusionMatrix& cm);

// Mann-Whitney form: P(score_pos > score_neg) + 0.5 P(tie) over all
// positive/negative pairs. Throws SingleClass when one class is absent.
double roc_auc(std::span<const int> y_true, std::span<const double> scores);

} // namespace fsbench
