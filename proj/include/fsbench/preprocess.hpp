#pragma once

#include "fsbench/dataset.hpp"

#include <cstdint>
#include <vector>

namespace fsbench {

// Keeps exactly the rows with no NaN cells, original order. Throws
// AllRowsDropped when nothing survives.
Dataset drop_nan_rows(const Dataset& dataset);

// Keeps the first occurrence of every (feature-vector, label) pair.
// Identical feature vectors with different labels are distinct pairs.
Dataset dedup_rows(const Dataset& dataset);

// Uniform random undersampling without replacement (seeded): every class is
// cut to min(n_malware, n_benign); output keeps original row order.
Dataset balance_undersample(const Dataset& dataset, std::uint64_t seed);

// Row subset helper shared by preprocessing and the fold loop. Indices must
// be in range; order of `rows` defines the output order.
Dataset take_rows(const Dataset& dataset, const std::vector<Index>& rows);

// Column subset; order of `cols` defines the output column order. Names and
// kinds follow the columns, rows and labels are untouched.
Dataset take_columns(const Dataset& dataset, const std::vector<Index>& cols);

} // namespace fsbench
