#pragma once

#include "fsbench/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fsbench {

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments; // per-row fold id in [0, k)

    std::vector<Index> test_rows(int fold) const;
    std::vector<Index> train_rows(int fold) const;
};

// Within each class, rows are shuffled (seeded) and dealt round-robin to the
// folds, so per-fold class counts deviate from perfect proportion by at most
// one. Classes smaller than K are dealt too (some folds miss them) and only
// rejected when strict is set.
FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed,
                          bool strict = false);

} // namespace fsbench
