#pragma once

#include "fsbench/dataset.hpp"
#include "fsbench/selection.hpp"

#include <cstdint>

namespace fsbench {

// 2x2 observed/expected table of (feature value, class). Indices are
// [feature value][class]. Non-binary feature values are thresholded at 0.5.
struct ContingencyTable {
    double observed[2][2] = {{0, 0}, {0, 0}};
    double expected[2][2] = {{0, 0}, {0, 0}};
    double n = 0;
};

ContingencyTable contingency(const Vector& column, const IntVector& labels);

// Sum over cells of (o-e)^2/e; cells with e = 0 contribute 0.
double chi_square_stat(const ContingencyTable& table);

FeatureScore score_chi_square(const Dataset& dataset);

// One-way F with df = (1, n-2). A perfectly separating feature (SSW = 0,
// SSB > 0) gets a +MAX sentinel score.
FeatureScore score_anova_f(const Dataset& dataset);

// Subset realization of the ANOVA filter: features with p < alpha under
// F(1, n-2). Falls back to the single best-F feature when nothing passes.
SelectionResult select_anova(const Dataset& dataset, const SelectorParams& params);

// Mutual information I(Y; X_j) in bits, plug-in estimate.
FeatureScore score_info_gain(const Dataset& dataset);

// Mean absolute deviation around the column mean; label-agnostic.
FeatureScore score_mad(const Dataset& dataset);

// |Pearson r| between feature and label; zero-variance columns score 0.
FeatureScore score_pearson(const Dataset& dataset);

struct ReliefFOptions {
    Index k_neighbors = 10;
    Index sample_cap = 200; // instances sampled, min(n, cap)
    std::uint64_t seed = 42;
};

// Standard ReliefF weights on range-normalized Manhattan distance. Neighbor
// counts shrink (with a log line) when a class is smaller than k+1.
FeatureScore score_relieff(const Dataset& dataset, const ReliefFOptions& options);

} // namespace fsbench
