#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fsbench/metrics.hpp"
#include "fsbench/selection.hpp"

namespace fsbench {

struct RunConfig {
    std::vector<std::string> dataset_paths;
    std::string label_column = "class";
    std::vector<std::string> methods;
    std::vector<std::string> models;
    int k = 5;
    bool balance = false;
    std::uint64_t seed = 42;
    int threads = 1;
    bool no_leakage = false;       // re-select inside every training fold
    bool store_timings = false;    // keep wall times in records (breaks byte reproducibility)
    std::string output_dir;
    double plugin_timeout_seconds = 3600.0;
    // per-method / per-model overrides: id -> key -> value
    std::map<std::string, std::map<std::string, std::string>> method_args;
    std::map<std::string, std::map<std::string, std::string>> model_args;

    void validate() const; // throws InvalidConfig
};

// One row of the results store. Failure entries carry the error text and
// placeholder metric/model/fold values.
struct EvalRecord {
    std::string dataset;
    std::string method;
    std::string model;
    int fold = 0;
    MetricSet metrics;
    Index n_selected = 0;
    double selection_seconds = 0.0;
    double train_seconds = 0.0;
    std::string mode; // "complete" or "balanced"
    std::string error; // non-empty marks a recorded failure

    bool failed() const { return !error.empty(); }
};

struct RunResult {
    std::vector<EvalRecord> records; // sorted by (dataset, method, model, fold)
    int failures = 0;
};

// Stages 2-3: per dataset, run each selector once on the full (preprocessed)
// dataset, then K-fold each model on the reduced dataset. no_leakage re-runs
// selection inside each training fold instead. Task failures become records,
// never aborts. Output is deterministic for a given config regardless of
// thread count.
RunResult evaluate_run(const RunConfig& cfg, const Registry& registry);

// JSON-lines store, one record per line, full precision.
void write_store(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> read_store(const std::string& path); // EmptyStore when no records

// Config echo + tool version + seed; enough to reproduce the store.
void write_manifest(const std::string& path, const RunConfig& cfg);

struct AggregateRow {
    std::map<std::string, std::string> keys; // group_by field -> value
    MetricSet mean;
    int count = 0; // records in the group
};

// Mean of every metric over successful records grouped by the given fields
// (subset of {dataset, method, model, mode}).
std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records,
                                    const std::vector<std::string>& group_by);

} // namespace fsbench
