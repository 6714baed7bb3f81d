#include "fsbench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/folds.hpp"
#include "fsbench/log.hpp"
#include "fsbench/models.hpp"
#include "fsbench/preprocess.hpp"
#include "fsbench/seeding.hpp"
#include "fsbench/version.hpp"

namespace fsbench {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void parallel_for(size_t count, int threads, const std::function<void(size_t)>& body) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::span<const int> label_span(const Dataset& d) {
    return {d.labels.data(), static_cast<size_t>(d.labels.size())};
}

SelectorParams params_for(const RunConfig& cfg, const std::string& method) {
    SelectorParams p;
    auto it = cfg.method_args.find(method);
    if (it != cfg.method_args.end()) {
        for (const auto& [key, value] : it->second) {
            try {
                if (key == "k") p.k = static_cast<Index>(std::stol(value));
                else if (key == "alpha") p.alpha = std::stod(value);
                else if (key == "lambda") p.lambda = std::stod(value);
                else p.extra[key] = value;
            } catch (const std::exception&) {
                throw InvalidConfig("bad value for --method-arg " + method + "." + key + "=" +
                                    value);
            }
        }
    }
    p.validate();
    return p;
}

MetricSet evaluate_fold(const RunConfig& cfg, const Dataset& reduced, const FoldPlan& plan,
                        int fold, const std::string& dataset_name, const std::string& method,
                        const std::string& model_id, double* train_seconds) {
    Dataset train = take_rows(reduced, plan.train_rows(fold));
    Dataset test = take_rows(reduced, plan.test_rows(fold));

    ModelSpec spec = ModelSpec::make(model_id);
    auto ma = cfg.model_args.find(model_id);
    if (ma != cfg.model_args.end()) spec = ModelSpec::make(model_id, ma->second);
    spec.seed = derive_seed(cfg.seed, dataset_name + "/" + method + "/" + model_id,
                            static_cast<std::uint64_t>(fold));

    const auto started = Clock::now();
    TrainedModel model = fit(spec, train);
    *train_seconds = seconds_since(started);

    std::vector<int> predicted = model.predict(test.features);
    Vector scores = model.score(test.features);

    MetricSet m = metrics_from_confusion(confusion(label_span(test), predicted));
    try {
        m.roc_auc = roc_auc(label_span(test),
                            {scores.data(), static_cast<size_t>(scores.size())});
    } catch (const SingleClass&) {
        log::debug("single-class test fold " + std::to_string(fold) + " on '" + dataset_name +
                   "'; roc_auc := 0");
        m.roc_auc = 0.0;
    }
    return m;
}

struct Collector {
    std::mutex mutex;
    std::vector<EvalRecord>* out;

    void push(EvalRecord record) {
        std::lock_guard<std::mutex> lock(mutex);
        out->push_back(std::move(record));
    }
};

} // namespace

void RunConfig::validate() const {
    if (k < 2) throw InvalidConfig("K must be >= 2");
    if (threads < 1) throw InvalidConfig("threads must be >= 1");
    if (dataset_paths.empty()) throw InvalidConfig("at least one dataset is required");
    if (methods.empty()) throw InvalidConfig("at least one method is required");
    if (models.empty()) throw InvalidConfig("at least one model is required");
}

RunResult evaluate_run(const RunConfig& cfg, const Registry& registry) {
    cfg.validate();
    for (const auto& m : cfg.methods)
        if (!registry.contains(m)) throw UnknownMethod(m);
    for (const auto& m : cfg.models) model_kind_from_id(m); // throws on unknown ids

    const std::string mode = cfg.balance ? "balanced" : "complete";

    // Stage 1: load and preprocess. Failures here are configuration
    // problems, not task failures, and propagate.
    std::vector<Dataset> datasets;
    for (const auto& path : cfg.dataset_paths) {
        CsvOptions opts;
        opts.label_column = cfg.label_column;
        opts.map_text_labels = true;
        Dataset d = load_csv(path, opts);
        if (auto sidecar = default_sidecar_path(path)) attach_kinds_sidecar(d, *sidecar);
        d = dedup_rows(drop_nan_rows(d));
        if (cfg.balance) d = balance_undersample(d, derive_seed(cfg.seed, "balance", d.name));
        log::info("dataset '" + d.name + "': " + std::to_string(d.n_rows()) + " rows x " +
                  std::to_string(d.n_cols()) + " features after preprocessing (" + mode + ")");
        datasets.push_back(std::move(d));
    }

    std::vector<FoldPlan> plans;
    for (const auto& d : datasets)
        plans.push_back(
            stratified_kfold(label_span(d), cfg.k, derive_seed(cfg.seed, "folds", d.name)));

    std::vector<EvalRecord> records;
    Collector collector{{}, &records};

    auto base_record = [&](size_t di, const std::string& method) {
        EvalRecord r;
        r.dataset = datasets[di].name;
        r.method = method;
        r.mode = mode;
        return r;
    };

    if (!cfg.no_leakage) {
        // Phase A: every selector once per dataset, on the full dataset.
        const size_t n_sel = datasets.size() * cfg.methods.size();
        std::vector<std::optional<SelectionResult>> selections(n_sel);
        std::vector<std::string> selection_errors(n_sel);
        parallel_for(n_sel, cfg.threads, [&](size_t t) {
            const size_t di = t / cfg.methods.size();
            const std::string& method = cfg.methods[t % cfg.methods.size()];
            try {
                SelectorParams p = params_for(cfg, method);
                p.seed = derive_seed(cfg.seed, "select", datasets[di].name + "/" + method);
                selections[t] = registry.select(method, datasets[di], p);
            } catch (const Error& e) {
                selection_errors[t] = e.what();
            } catch (const std::exception& e) {
                selection_errors[t] = std::string("Unexpected: ") + e.what();
            }
        });

        // Phase B: models x folds on each reduced dataset.
        struct EvalTask {
            size_t di;
            size_t sel;
            std::string model;
        };
        std::vector<EvalTask> tasks;
        for (size_t t = 0; t < n_sel; ++t) {
            const size_t di = t / cfg.methods.size();
            const std::string& method = cfg.methods[t % cfg.methods.size()];
            if (!selections[t]) {
                EvalRecord r = base_record(di, method);
                r.model = "*";
                r.fold = -1;
                r.error = selection_errors[t];
                log::error("selection failed for " + r.dataset + "/" + method + ": " + r.error);
                collector.push(std::move(r));
                continue;
            }
            for (const auto& model : cfg.models) tasks.push_back({di, t, model});
        }

        parallel_for(tasks.size(), cfg.threads, [&](size_t ti) {
            const auto& task = tasks[ti];
            const auto& selection = *selections[task.sel];
            const std::string& method = cfg.methods[task.sel % cfg.methods.size()];
            try {
                Dataset reduced = apply_selection(datasets[task.di], selection);
                for (int fold = 0; fold < cfg.k; ++fold) {
                    EvalRecord r = base_record(task.di, method);
                    r.model = task.model;
                    r.fold = fold;
                    r.n_selected = static_cast<Index>(selection.selected.size());
                    r.selection_seconds = selection.selection_seconds;
                    r.metrics = evaluate_fold(cfg, reduced, plans[task.di], fold, r.dataset,
                                              method, task.model, &r.train_seconds);
                    collector.push(std::move(r));
                }
            } catch (const Error& e) {
                EvalRecord r = base_record(task.di, method);
                r.model = task.model;
                r.fold = -1;
                r.error = e.what();
                log::error("evaluation failed for " + r.dataset + "/" + method + "/" +
                           task.model + ": " + r.error);
                collector.push(std::move(r));
            }
        });
    } else {
        // Strict mode: selection re-fitted inside every training fold.
        struct FoldTask {
            size_t di;
            std::string method;
        };
        std::vector<FoldTask> tasks;
        for (size_t di = 0; di < datasets.size(); ++di)
            for (const auto& method : cfg.methods) tasks.push_back({di, method});

        parallel_for(tasks.size(), cfg.threads, [&](size_t ti) {
            const auto& task = tasks[ti];
            const Dataset& full = datasets[task.di];
            for (int fold = 0; fold < cfg.k; ++fold) {
                SelectionResult selection;
                try {
                    Dataset train_full = take_rows(full, plans[task.di].train_rows(fold));
                    SelectorParams p = params_for(cfg, task.method);
                    p.seed = derive_seed(cfg.seed, "select", full.name + "/" + task.method,
                                         static_cast<std::uint64_t>(fold));
                    selection = registry.select(task.method, train_full, p);
                } catch (const Error& e) {
                    EvalRecord r = base_record(task.di, task.method);
                    r.model = "*";
                    r.fold = fold;
                    r.error = e.what();
                    log::error("fold selection failed for " + r.dataset + "/" + task.method +
                               ": " + r.error);
                    collector.push(std::move(r));
                    continue;
                }
                for (const auto& model : cfg.models) {
                    EvalRecord r = base_record(task.di, task.method);
                    r.model = model;
                    r.fold = fold;
                    try {
                        Dataset reduced = apply_selection(full, selection);
                        r.n_selected = static_cast<Index>(selection.selected.size());
                        r.selection_seconds = selection.selection_seconds;
                        r.metrics = evaluate_fold(cfg, reduced, plans[task.di], fold, r.dataset,
                                                  task.method, model, &r.train_seconds);
                    } catch (const Error& e) {
                        r.error = e.what();
                        log::error("evaluation failed for " + r.dataset + "/" + task.method +
                                   "/" + model + ": " + r.error);
                    }
                    collector.push(std::move(r));
                }
            }
        });
    }

    RunResult result;
    result.records = std::move(records);
    std::sort(result.records.begin(), result.records.end(),
              [](const EvalRecord& a, const EvalRecord& b) {
                  return std::tie(a.dataset, a.method, a.model, a.fold) <
                         std::tie(b.dataset, b.method, b.model, b.fold);
              });
    if (!cfg.store_timings) {
        for (auto& r : result.records) {
            r.selection_seconds = 0.0;
            r.train_seconds = 0.0;
        }
    }
    for (const auto& r : result.records)
        if (r.failed()) ++result.failures;
    return result;
}

void write_store(const std::string& path, const std::vector<EvalRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UnwritableOutputDir(path);
    for (const auto& r : records) {
        json line;
        line["dataset"] = r.dataset;
        line["method"] = r.method;
        line["model"] = r.model;
        line["fold"] = r.fold;
        if (r.failed()) {
            line["error"] = r.error;
        } else {
            json metrics;
            metrics["accuracy"] = r.metrics.accuracy;
            metrics["precision"] = r.metrics.precision;
            metrics["recall"] = r.metrics.recall;
            metrics["f1"] = r.metrics.f1;
            metrics["roc_auc"] = r.metrics.roc_auc;
            metrics["mcc"] = r.metrics.mcc;
            line["metrics"] = std::move(metrics);
            line["n_selected"] = static_cast<long long>(r.n_selected);
            line["selection_seconds"] = r.selection_seconds;
            line["train_seconds"] = r.train_seconds;
        }
        line["mode"] = r.mode;
        out << line.dump() << '\n';
    }
    if (!out) throw UnwritableOutputDir(path);
}

std::vector<EvalRecord> read_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmptyStore("cannot open store '" + path + "'");
    std::vector<EvalRecord> records;
    std::string linetext;
    size_t lineno = 0;
    while (std::getline(in, linetext)) {
        ++lineno;
        if (linetext.empty()) continue;
        json line;
        try {
            line = json::parse(linetext);
        } catch (const json::parse_error& e) {
            throw EmptyStore("store '" + path + "' line " + std::to_string(lineno) +
                             " is not valid JSON: " + e.what());
        }
        EvalRecord r;
        r.dataset = line.value("dataset", "");
        r.method = line.value("method", "");
        r.model = line.value("model", "");
        r.fold = line.value("fold", 0);
        r.mode = line.value("mode", "complete");
        if (line.contains("error")) {
            r.error = line["error"].get<std::string>();
        } else {
            const auto& m = line.at("metrics");
            r.metrics.accuracy = m.value("accuracy", 0.0);
            r.metrics.precision = m.value("precision", 0.0);
            r.metrics.recall = m.value("recall", 0.0);
            r.metrics.f1 = m.value("f1", 0.0);
            r.metrics.roc_auc = m.value("roc_auc", 0.0);
            r.metrics.mcc = m.value("mcc", 0.0);
            r.n_selected = line.value("n_selected", 0);
            r.selection_seconds = line.value("selection_seconds", 0.0);
            r.train_seconds = line.value("train_seconds", 0.0);
        }
        records.push_back(std::move(r));
    }
    if (records.empty()) throw EmptyStore("store '" + path + "' holds no records");
    return records;
}

void write_manifest(const std::string& path, const RunConfig& cfg) {
    json m;
    m["tool"] = "fsbench";
    m["version"] = kVersion;
    m["seed"] = cfg.seed;
    m["datasets"] = cfg.dataset_paths;
    m["label_column"] = cfg.label_column;
    m["methods"] = cfg.methods;
    m["models"] = cfg.models;
    m["k"] = cfg.k;
    m["balance"] = cfg.balance;
    m["no_leakage"] = cfg.no_leakage;
    m["store_timings"] = cfg.store_timings;
    m["threads"] = cfg.threads;
    m["method_args"] = cfg.method_args;
    m["model_args"] = cfg.model_args;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UnwritableOutputDir(path);
    out << m.dump(2) << '\n';
}

std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records,
                                    const std::vector<std::string>& group_by) {
    for (const auto& field : group_by) {
        if (field != "dataset" && field != "method" && field != "model" && field != "mode")
            throw InvalidConfig("aggregate: unknown group-by field '" + field + "'");
    }
    auto key_of = [&](const EvalRecord& r) {
        std::map<std::string, std::string> key;
        for (const auto& field : group_by) {
            if (field == "dataset") key[field] = r.dataset;
            else if (field == "method") key[field] = r.method;
            else if (field == "model") key[field] = r.model;
            else key[field] = r.mode;
        }
        return key;
    };

    std::map<std::map<std::string, std::string>, AggregateRow> groups;
    for (const auto& r : records) {
        if (r.failed()) continue;
        auto key = key_of(r);
        auto& row = groups[key];
        row.keys = key;
        row.mean.accuracy += r.metrics.accuracy;
        row.mean.precision += r.metrics.precision;
        row.mean.recall += r.metrics.recall;
        row.mean.f1 += r.metrics.f1;
        row.mean.roc_auc += r.metrics.roc_auc;
        row.mean.mcc += r.metrics.mcc;
        ++row.count;
    }
    std::vector<AggregateRow> rows;
    for (auto& [key, row] : groups) {
        const double n = row.count;
        row.mean.accuracy /= n;
        row.mean.precision /= n;
        row.mean.recall /= n;
        row.mean.f1 /= n;
        row.mean.roc_auc /= n;
        row.mean.mcc /= n;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace fsbench
