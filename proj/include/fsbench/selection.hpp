#pragma once

#include "fsbench/dataset.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fsbench {

// Ordering methods produce a full ranking that gets cut at a budget k;
// Subset methods decide their own selected set size.
enum class SelectorKind { Ordering, Subset };

std::string to_string(SelectorKind kind);

struct FeatureScore {
    // (feature index, score); higher score = more relevant. Indices unique
    // and inside [0, n_cols).
    std::vector<std::pair<Index, double>> entries;

    std::optional<double> score_of(Index feature) const;
};

struct SelectionResult {
    std::string method_id;
    std::vector<Index> selected;            // non-empty, unique, in bounds
    std::optional<FeatureScore> ranking;
    std::map<std::string, std::string> params;
    double selection_seconds = 0.0;
};

struct SelectorParams {
    std::optional<Index> k;        // Ordering budget
    std::optional<double> alpha;   // significance level
    std::optional<double> lambda;  // L1 strength
    std::uint64_t seed = 42;
    std::map<std::string, std::string> extra; // method-specific keys

    void validate() const;
    // extra-key lookups with defaults; malformed values throw InvalidConfig
    long get_int(const std::string& key, long fallback) const;
    double get_real(const std::string& key, double fallback) const;
};

// k indices with highest score, ties broken by lower feature index.
std::vector<Index> top_k(const FeatureScore& ranking, Index k);

// Columns restricted to result.selected in that order; rows and labels
// unchanged.
Dataset apply_selection(const Dataset& dataset, const SelectionResult& result);

struct MethodInfo {
    std::string id;
    SelectorKind kind = SelectorKind::Ordering;
    std::string description;
    bool builtin = true;
    bool baseline = false; // usable in runs, hidden from the default listing
};

using ScoreFn = std::function<FeatureScore(const Dataset&, const SelectorParams&)>;
using SubsetFn = std::function<SelectionResult(const Dataset&, const SelectorParams&)>;

// Method registry. Built once (built-ins plus any discovered plugins) and
// read-only afterwards; select() calls are safe to run concurrently.
class Registry {
public:
    static Registry with_builtins();

    void register_ordering(MethodInfo info, ScoreFn score);
    void register_subset(MethodInfo info, SubsetFn select);

    bool contains(const std::string& id) const;
    const MethodInfo& info(const std::string& id) const;
    // Sorted by id. Baselines excluded unless asked for.
    std::vector<MethodInfo> list(bool include_baselines = false) const;

    SelectionResult select(const std::string& method_id, const Dataset& dataset,
                           const SelectorParams& params) const;

private:
    struct Entry {
        MethodInfo info;
        ScoreFn score;    // set for Ordering methods
        SubsetFn subset;  // set for Subset methods
    };
    std::map<std::string, Entry> methods_;
};

// Default Ordering budget when params.k is absent: ceil(n_cols / 2).
Index default_ordering_budget(Index n_cols);

// Throws unless `selected` is non-empty, unique and within [0, n_cols).
void validate_selected(const std::vector<Index>& selected, Index n_cols,
                       const std::string& context);

} // namespace fsbench
