#pragma once

#include "fsbench/dataset.hpp"
#include "fsbench/selection.hpp"

namespace fsbench {

// Binary artificial bee colony over feature-inclusion bitmasks. Fitness is
// mean stratified 3-fold F1 of the KNN model on the masked dataset minus a
// 0.001 * (subset size / n_cols) parsimony penalty. Employed, onlooker and
// scout phases follow the canonical algorithm; a neighbour flips one random
// bit and sources stagnant for 10 trials are re-seeded by scouts.
SelectionResult select_abc(const Dataset& dataset, const SelectorParams& params);

} // namespace fsbench
