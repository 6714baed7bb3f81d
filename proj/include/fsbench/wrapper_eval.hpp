#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsbench/dataset.hpp"
#include "fsbench/types.hpp"

namespace fsbench {

// Inner-loop evaluation shared by the wrapper selectors: mean F1 over a
// seeded stratified K-fold of the column-masked dataset. A fold whose
// training split degenerates to one class scores 0 (logged at debug).
double inner_cv_f1(const Dataset& dataset, const std::vector<Index>& cols,
                   const std::string& model_id, int folds, std::uint64_t seed);

} // namespace fsbench
