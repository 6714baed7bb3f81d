#include "fsbench/preprocess.hpp"

#include "fsbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <unordered_set>

namespace fsbench {

Dataset take_rows(const Dataset& dataset, const std::vector<Index>& rows) {
    Dataset out;
    out.name = dataset.name;
    out.feature_names = dataset.feature_names;
    out.feature_kinds = dataset.feature_kinds;
    out.features.resize(static_cast<Index>(rows.size()), dataset.n_cols());
    out.labels.resize(static_cast<Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= dataset.n_rows())
            throw IndexOutOfRange("row " + std::to_string(rows[i]));
        out.features.row(static_cast<Index>(i)) = dataset.features.row(rows[i]);
        out.labels[static_cast<Index>(i)] = dataset.labels[rows[i]];
    }
    return out;
}

Dataset take_columns(const Dataset& dataset, const std::vector<Index>& cols) {
    Dataset out;
    out.name = dataset.name;
    out.labels = dataset.labels;
    out.features.resize(dataset.n_rows(), static_cast<Index>(cols.size()));
    if (dataset.feature_kinds) out.feature_kinds.emplace();
    for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] < 0 || cols[i] >= dataset.n_cols())
            throw IndexOutOfRange("column " + std::to_string(cols[i]));
        out.features.col(static_cast<Index>(i)) = dataset.features.col(cols[i]);
        out.feature_names.push_back(dataset.feature_names[static_cast<size_t>(cols[i])]);
        if (dataset.feature_kinds)
            out.feature_kinds->push_back((*dataset.feature_kinds)[static_cast<size_t>(cols[i])]);
    }
    return out;
}

Dataset drop_nan_rows(const Dataset& dataset) {
    std::vector<Index> keep;
    keep.reserve(static_cast<size_t>(dataset.n_rows()));
    for (Index r = 0; r < dataset.n_rows(); ++r) {
        bool clean = true;
        for (Index c = 0; c < dataset.n_cols(); ++c) {
            if (std::isnan(dataset.features(r, c))) { clean = false; break; }
        }
        if (clean) keep.push_back(r);
    }
    if (keep.empty()) throw AllRowsDropped(dataset.name);
    if (static_cast<Index>(keep.size()) == dataset.n_rows()) return dataset;
    return take_rows(dataset, keep);
}

namespace {

struct RowKey {
    const Dataset* d;
    Index row;
};

struct RowKeyHash {
    size_t operator()(const RowKey& k) const {
        // FNV-1a over the raw bytes of the row plus the label
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](const void* p, size_t n) {
            const auto* b = static_cast<const unsigned char*>(p);
            for (size_t i = 0; i < n; ++i) {
                h ^= b[i];
                h *= 1099511628211ULL;
            }
        };
        for (Index c = 0; c < k.d->n_cols(); ++c) {
            double v = k.d->features(k.row, c);
            mix(&v, sizeof(v));
        }
        int label = k.d->labels[k.row];
        mix(&label, sizeof(label));
        return static_cast<size_t>(h);
    }
};

struct RowKeyEq {
    bool operator()(const RowKey& a, const RowKey& b) const {
        if (a.d->labels[a.row] != b.d->labels[b.row]) return false;
        for (Index c = 0; c < a.d->n_cols(); ++c)
            if (a.d->features(a.row, c) != b.d->features(b.row, c)) return false;
        return true;
    }
};

} // namespace

Dataset dedup_rows(const Dataset& dataset) {
    std::unordered_set<RowKey, RowKeyHash, RowKeyEq> seen;
    seen.reserve(static_cast<size_t>(dataset.n_rows()));
    std::vector<Index> keep;
    keep.reserve(static_cast<size_t>(dataset.n_rows()));
    for (Index r = 0; r < dataset.n_rows(); ++r)
        if (seen.insert(RowKey{&dataset, r}).second) keep.push_back(r);
    if (static_cast<Index>(keep.size()) == dataset.n_rows()) return dataset;
    return take_rows(dataset, keep);
}

Dataset balance_undersample(const Dataset& dataset, std::uint64_t seed) {
    std::vector<Index> by_class[2];
    for (Index r = 0; r < dataset.n_rows(); ++r)
        by_class[dataset.labels[r]].push_back(r);
    if (by_class[0].empty() || by_class[1].empty())
        throw SingleClass(dataset.name + ": balancing needs both classes");

    const size_t target = std::min(by_class[0].size(), by_class[1].size());
    std::mt19937_64 rng(seed);
    std::vector<Index> keep;
    keep.reserve(2 * target);
    for (auto& members : by_class) {
        if (members.size() > target) {
            std::shuffle(members.begin(), members.end(), rng);
            members.resize(target);
        }
        keep.insert(keep.end(), members.begin(), members.end());
    }
    std::sort(keep.begin(), keep.end());
    return take_rows(dataset, keep);
}

} // namespace fsbench
