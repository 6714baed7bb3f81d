#pragma once

#include <vector>

#include "fsbench/dataset.hpp"
#include "fsbench/selection.hpp"

namespace fsbench {

// Incremental-evaluation record for the saturation-style stopping rules.
struct SaturationTrace {
    struct Step {
        Index subset_size = 0;
        double metric = 0.0; // in [0, 1]
    };
    std::vector<Step> steps; // subset_size strictly increasing
};

// Three-level permission pruning: grow by signed malware/benign rate
// difference until the F1 trace saturates, drop rare-support features, then
// collapse near-certain co-occurrence pairs. `trace` (optional) receives the
// level-1 record.
SelectionResult select_sigpid(const Dataset& dataset, const SelectorParams& params,
                              SaturationTrace* trace = nullptr);

// Info-gain ranking over API-call columns; returns the smallest prefix whose
// mean 3-fold F1 reaches 99.5% of the best observed value.
SelectionResult select_sigapi(const Dataset& dataset, const SelectorParams& params,
                              SaturationTrace* trace = nullptr);

// Info-gain ranking evaluated with the random forest on a 10%..100% size
// grid; returns the smallest size within 0.005 of the grid maximum.
SelectionResult select_rfg(const Dataset& dataset, const SelectorParams& params,
                           SaturationTrace* trace = nullptr);

// Info-gain weights mapped through a DE-optimized function (linear, power or
// logistic) and thresholded; the mapping, its parameters and the cut are
// jointly tuned for mean 3-fold KNN F1.
SelectionResult select_jowmdroid(const Dataset& dataset, const SelectorParams& params);

// Tiered filtering: drop near-constant columns, collapse highly correlated
// pairs keeping the higher info gain, then keep features above the median
// info gain of the survivors.
SelectionResult select_mt(const Dataset& dataset, const SelectorParams& params);

// Rank aggregation over info gain, chi-square, |Pearson| and MAD; keeps the
// top half by mean rank position.
SelectionResult select_semidroid(const Dataset& dataset, const SelectorParams& params);

} // namespace fsbench
