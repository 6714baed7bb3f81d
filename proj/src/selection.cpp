#include "fsbench/selection.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

namespace fsbench {

std::string to_string(SelectorKind kind) {
    return kind == SelectorKind::Ordering ? "Ordering" : "Subset";
}

std::optional<double> FeatureScore::score_of(Index feature) const {
    for (const auto& [idx, score] : entries)
        if (idx == feature) return score;
    return std::nullopt;
}

void SelectorParams::validate() const {
    if (k && *k < 1) throw InvalidConfig("k must be >= 1");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw InvalidConfig("alpha must be in (0,1)");
    if (lambda && *lambda < 0.0) throw InvalidConfig("lambda must be >= 0");
}

long SelectorParams::get_int(const std::string& key, long fallback) const {
    auto it = extra.find(key);
    if (it == extra.end()) return fallback;
    try {
        size_t pos = 0;
        long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("expected integer for '" + key + "', got '" + it->second + "'");
    }
}

double SelectorParams::get_real(const std::string& key, double fallback) const {
    auto it = extra.find(key);
    if (it == extra.end()) return fallback;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("expected number for '" + key + "', got '" + it->second + "'");
    }
}

std::vector<Index> top_k(const FeatureScore& ranking, Index k) {
    if (k < 1 || static_cast<size_t>(k) > ranking.entries.size())
        throw KTooLarge("k=" + std::to_string(k) + " for ranking of " +
                        std::to_string(ranking.entries.size()));
    auto entries = ranking.entries;
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<Index> out(static_cast<size_t>(k));
    for (Index i = 0; i < k; ++i) out[static_cast<size_t>(i)] = entries[static_cast<size_t>(i)].first;
    return out;
}

Dataset apply_selection(const Dataset& dataset, const SelectionResult& result) {
    validate_selected(result.selected, dataset.n_cols(), result.method_id);
    Dataset out;
    out.name = dataset.name;
    out.labels = dataset.labels;
    out.features.resize(dataset.n_rows(), static_cast<Index>(result.selected.size()));
    out.feature_names.reserve(result.selected.size());
    if (dataset.feature_kinds) out.feature_kinds.emplace();
    for (size_t i = 0; i < result.selected.size(); ++i) {
        const Index col = result.selected[i];
        out.features.col(static_cast<Index>(i)) = dataset.features.col(col);
        out.feature_names.push_back(dataset.feature_names[static_cast<size_t>(col)]);
        if (dataset.feature_kinds)
            out.feature_kinds->push_back((*dataset.feature_kinds)[static_cast<size_t>(col)]);
    }
    return out;
}

Index default_ordering_budget(Index n_cols) {
    return (n_cols + 1) / 2;
}

void validate_selected(const std::vector<Index>& selected, Index n_cols,
                       const std::string& context) {
    if (selected.empty()) throw EmptySelection(context + ": empty selection");
    std::unordered_set<Index> seen;
    for (Index idx : selected) {
        if (idx < 0 || idx >= n_cols)
            throw IndexOutOfRange(context + ": feature " + std::to_string(idx) +
                                  " outside [0," + std::to_string(n_cols) + ")");
        if (!seen.insert(idx).second)
            throw Error("DuplicateIndex", context + ": feature " + std::to_string(idx));
    }
}

void Registry::register_ordering(MethodInfo info, ScoreFn score) {
    info.kind = SelectorKind::Ordering;
    const std::string id = info.id;
    methods_[id] = Entry{std::move(info), std::move(score), nullptr};
}

void Registry::register_subset(MethodInfo info, SubsetFn select) {
    info.kind = SelectorKind::Subset;
    const std::string id = info.id;
    methods_[id] = Entry{std::move(info), nullptr, std::move(select)};
}

bool Registry::contains(const std::string& id) const {
    return methods_.count(id) > 0;
}

const MethodInfo& Registry::info(const std::string& id) const {
    auto it = methods_.find(id);
    if (it == methods_.end()) throw UnknownMethod(id);
    return it->second.info;
}

std::vector<MethodInfo> Registry::list(bool include_baselines) const {
    std::vector<MethodInfo> out;
    for (const auto& [id, entry] : methods_)
        if (include_baselines || !entry.info.baseline) out.push_back(entry.info);
    return out; // map iteration is already id-sorted
}

SelectionResult Registry::select(const std::string& method_id, const Dataset& dataset,
                                 const SelectorParams& params) const {
    auto it = methods_.find(method_id);
    if (it == methods_.end()) throw UnknownMethod(method_id);
    params.validate();
    const Entry& entry = it->second;

    const auto t0 = std::chrono::steady_clock::now();
    SelectionResult result;
    try {
        if (entry.info.kind == SelectorKind::Ordering) {
            FeatureScore ranking = entry.score(dataset, params);
            const Index budget = params.k ? std::min<Index>(*params.k, dataset.n_cols())
                                          : default_ordering_budget(dataset.n_cols());
            result.method_id = method_id;
            result.selected = top_k(ranking, budget);
            result.ranking = std::move(ranking);
            result.params["k"] = std::to_string(budget);
        } else {
            if (params.k)
                log::info(method_id + ": subset method, ignoring k=" + std::to_string(*params.k));
            result = entry.subset(dataset, params);
            result.method_id = method_id;
        }
    } catch (const UnknownMethod&) {
        throw;
    } catch (const Error& e) {
        throw SelectorFailure(method_id + " failed (" + e.what() + ")");
    }
    result.params["seed"] = std::to_string(params.seed);
    result.selection_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    validate_selected(result.selected, dataset.n_cols(), method_id);
    return result;
}

} // namespace fsbench
