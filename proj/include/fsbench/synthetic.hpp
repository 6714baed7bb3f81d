#pragma once

#include <cstdint>
#include <vector>

#include "fsbench/dataset.hpp"

namespace fsbench {

struct PlantedSpec {
    Index rows = 2000;
    Index informative = 5;   // columns carrying a noisy copy of the label
    Index noise = 45;        // Bernoulli(0.5) columns
    double flip_prob = 0.1;  // label-copy corruption rate
    std::uint64_t seed = 42;
};

struct PlantedDataset {
    Dataset data;
    std::vector<Index> informative; // column positions of the planted features
};

// Binary dataset with known ground truth: labels ~ Bernoulli(0.5) (first two
// rows pinned to one of each class), informative columns copy the label and
// flip with `flip_prob`, noise columns are fair coins. Column positions are
// shuffled so the informative set is not a prefix.
PlantedDataset make_planted_dataset(const PlantedSpec& spec);

} // namespace fsbench
