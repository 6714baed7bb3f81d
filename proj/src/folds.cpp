#include "fsbench/folds.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace fsbench {

std::vector<Index> FoldPlan::test_rows(int fold) const {
    std::vector<Index> rows;
    for (size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) rows.push_back(static_cast<Index>(i));
    return rows;
}

std::vector<Index> FoldPlan::train_rows(int fold) const {
    std::vector<Index> rows;
    for (size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) rows.push_back(static_cast<Index>(i));
    return rows;
}

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed, bool strict) {
    if (k < 2) throw InvalidK("K must be >= 2, got " + std::to_string(k));
    if (labels.empty()) throw Error("EmptyLabels", "stratified_kfold on empty labels");
    if (static_cast<size_t>(k) > labels.size())
        throw InvalidK("K exceeds number of rows");

    std::map<int, std::vector<size_t>> by_class;
    for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    for (const auto& [cls, members] : by_class) {
        if (members.size() < static_cast<size_t>(k)) {
            const std::string msg = "class " + std::to_string(cls) + " has " +
                                    std::to_string(members.size()) + " members < K=" +
                                    std::to_string(k);
            if (strict) throw ClassSmallerThanK(msg);
            log::warn("stratified_kfold: " + msg + "; some folds will miss it");
        }
    }

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(labels.size(), 0);
    std::mt19937_64 rng(seed);
    for (auto& [cls, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (size_t i = 0; i < members.size(); ++i)
            plan.assignments[members[i]] = static_cast<int>(i % static_cast<size_t>(k));
    }
    return plan;
}

} // namespace fsbench
