#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"
#include "fsbench/models.hpp"
#include "fsbench/plugin.hpp"
#include "fsbench/report.hpp"
#include "fsbench/runner.hpp"
#include "fsbench/version.hpp"

namespace fs = std::filesystem;
using namespace fsbench;

namespace {

log::Level level_from_name(const std::string& name) {
    if (name == "debug") return log::Level::Debug;
    if (name == "info") return log::Level::Info;
    if (name == "warn") return log::Level::Warn;
    if (name == "error") return log::Level::Error;
    throw InvalidConfig("unknown log level '" + name + "'");
}

// "id.key=value" -> (id, key, value)
void parse_scoped_arg(const std::string& raw,
                      std::map<std::string, std::map<std::string, std::string>>& into,
                      const char* flag) {
    const auto dot = raw.find('.');
    const auto eq = raw.find('=', dot == std::string::npos ? 0 : dot);
    if (dot == std::string::npos || eq == std::string::npos || dot == 0 || eq <= dot + 1)
        throw InvalidConfig(std::string(flag) + " expects id.key=value, got '" + raw + "'");
    into[raw.substr(0, dot)][raw.substr(dot + 1, eq - dot - 1)] = raw.substr(eq + 1);
}

std::string normalize_model_id(const std::string& id) {
    return to_string(model_kind_from_id(id)); // canonicalizes the "svm" alias
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot read config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidConfig("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw InvalidConfig("config file must hold a JSON object");
    if (doc.contains("data")) cfg.dataset_paths = doc["data"].get<std::vector<std::string>>();
    if (doc.contains("label_column")) cfg.label_column = doc["label_column"].get<std::string>();
    if (doc.contains("methods")) cfg.methods = doc["methods"].get<std::vector<std::string>>();
    if (doc.contains("models")) cfg.models = doc["models"].get<std::vector<std::string>>();
    if (doc.contains("k")) cfg.k = doc["k"].get<int>();
    if (doc.contains("balance")) cfg.balance = doc["balance"].get<bool>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("no_leakage")) cfg.no_leakage = doc["no_leakage"].get<bool>();
    if (doc.contains("store_timings")) cfg.store_timings = doc["store_timings"].get<bool>();
    if (doc.contains("out")) cfg.output_dir = doc["out"].get<std::string>();
    if (doc.contains("method_args"))
        cfg.method_args =
            doc["method_args"].get<std::map<std::string, std::map<std::string, std::string>>>();
    if (doc.contains("model_args"))
        cfg.model_args =
            doc["model_args"].get<std::map<std::string, std::map<std::string, std::string>>>();
}

int cmd_list(const Registry& registry, bool all) {
    std::printf("%-20s %-9s %s\n", "id", "kind", "description");
    for (const auto& info : registry.list(all)) {
        // plugin descriptions may span lines; keep the table one row per method
        std::string desc = info.description;
        std::replace(desc.begin(), desc.end(), '\n', ' ');
        std::printf("%-20s %-9s %s%s\n", info.id.c_str(), to_string(info.kind).c_str(),
                    desc.c_str(), info.builtin ? "" : " [plugin]");
    }
    return 0;
}

int cmd_describe(const Registry& registry, const std::string& id) {
    if (registry.contains(id)) {
        const MethodInfo& info = registry.info(id);
        std::printf("method:      %s%s\n", info.id.c_str(), info.builtin ? "" : " (plugin)");
        std::printf("kind:        %s\n", to_string(info.kind).c_str());
        std::printf("description: %s\n", info.description.c_str());
        if (info.kind == SelectorKind::Ordering)
            std::printf("budget:      top-k cut, default k = ceil(n_cols/2), override with "
                        "--method-arg %s.k=<n>\n",
                        info.id.c_str());
        return 0;
    }
    try {
        const ModelKind kind = model_kind_from_id(id);
        std::printf("model:       %s\n", to_string(kind).c_str());
        std::printf("description: %s\n", model_description(kind).c_str());
        return 0;
    } catch (const Error&) {
        std::fprintf(stderr, "unknown method or model '%s'; see list-methods\n", id.c_str());
        return 1;
    }
}

int cmd_run(const Registry& registry, RunConfig cfg, bool force) {
    // expand "all" and canonicalize
    std::vector<std::string> methods;
    for (const auto& m : cfg.methods) {
        if (m == "all") {
            for (const auto& info : registry.list(false)) methods.push_back(info.id);
        } else {
            methods.push_back(m);
        }
    }
    cfg.methods = std::move(methods);
    for (auto& m : cfg.models) m = normalize_model_id(m);
    {
        std::map<std::string, std::map<std::string, std::string>> canon;
        for (auto& [id, kv] : cfg.model_args) canon[normalize_model_id(id)] = kv;
        cfg.model_args = std::move(canon);
    }
    cfg.validate();

    const fs::path out_dir = cfg.output_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        throw UnwritableOutputDir(cfg.output_dir + ": " + ec.message());
    const fs::path store_path = out_dir / "store.jsonl";
    if (fs::exists(store_path) && !force)
        throw InvalidConfig("output dir '" + cfg.output_dir +
                            "' already holds a store; pass --force to overwrite");

    log::set_sink_file((out_dir / "run.log").string());
    log::info("fsbench " + std::string(kVersion) + " starting run, seed " +
              std::to_string(cfg.seed));

    const RunResult result = evaluate_run(cfg, registry);
    write_store(store_path.string(), result.records);
    write_manifest((out_dir / "manifest.json").string(), cfg);

    log::info("wrote " + std::to_string(result.records.size()) + " records ("
              + std::to_string(result.failures) + " failures) to " + store_path.string());
    log::set_sink_file("");
    return result.failures > 0 ? 1 : 0;
}

int cmd_report(const std::string& store, const std::string& view, const std::string& format,
               const std::string& mode, const std::string& out, const ReportOptions& options) {
    const auto records = read_store(store);
    if (view == "summary") {
        emit_summary(summarize(records, mode), format, out, options);
    } else if (view == "heatmap") {
        emit_heatmap(heatmap(records), format, out, options);
    } else if (view == "box") {
        emit_boxstats(boxstats(records), format, out, options);
    } else {
        throw InvalidConfig("unknown view '" + view + "' (use summary, heatmap or box)");
    }
    log::info("wrote " + view + " (" + format + ") to " + out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsbench: feature-selection benchmarking on binary malware datasets"};
    app.set_version_flag("--version", kVersion);

    std::string log_level = "info";
    app.add_option("--log-level", log_level, "debug|info|warn|error")
        ->capture_default_str();
    std::string plugin_dir;
    if (const char* env = std::getenv("FSBENCH_PLUGIN_DIR")) plugin_dir = env;
    app.add_option("--plugin-dir", plugin_dir,
                   "plugin root directory (default: $FSBENCH_PLUGIN_DIR)");
    double plugin_timeout = 3600.0;
    app.add_option("--plugin-timeout", plugin_timeout, "plugin time limit in seconds")
        ->capture_default_str();

    auto* list_cmd = app.add_subcommand("list-methods", "List registered selection methods");
    bool list_all = false;
    list_cmd->add_flag("--all", list_all, "include hidden baseline methods");

    auto* describe_cmd = app.add_subcommand("describe", "Describe a method or model");
    std::string describe_id;
    describe_cmd->add_option("id", describe_id, "method or model id")->required();

    auto* run_cmd = app.add_subcommand("run", "Run a selection x model benchmark grid");
    RunConfig cfg;
    std::string config_file;
    bool force = false;
    std::vector<std::string> method_arg_raw, model_arg_raw;
    run_cmd->add_option("--config", config_file, "JSON config file (flags win)");
    auto* opt_data = run_cmd->add_option("-d,--data", cfg.dataset_paths,
                                         "dataset CSV path (repeatable)")
                         ->delimiter(',');
    auto* opt_label = run_cmd->add_option("--label-column", cfg.label_column,
                                          "label column name")
                          ->capture_default_str();
    auto* opt_methods = run_cmd->add_option("-m,--methods", cfg.methods,
                                            "method ids or 'all' (repeatable)")
                            ->delimiter(',');
    auto* opt_models = run_cmd->add_option("--models", cfg.models,
                                           "model ids among knn, rf, svm-linear")
                           ->delimiter(',');
    auto* opt_k = run_cmd->add_option("-k,--folds", cfg.k, "stratified folds K")
                      ->capture_default_str();
    auto* opt_balance = run_cmd->add_flag("--balance", cfg.balance,
                                          "undersample the majority class first");
    auto* opt_seed = run_cmd->add_option("--seed", cfg.seed, "run seed")->capture_default_str();
    auto* opt_threads = run_cmd->add_option("--threads", cfg.threads, "worker threads")
                            ->capture_default_str();
    auto* opt_noleak = run_cmd->add_flag("--no-leakage", cfg.no_leakage,
                                         "re-run selection inside each training fold");
    auto* opt_timings = run_cmd->add_flag(
        "--store-timings", cfg.store_timings,
        "keep wall-clock timings in the store (breaks byte-for-byte reproducibility)");
    auto* opt_out = run_cmd->add_option("-o,--out", cfg.output_dir, "output directory");
    run_cmd->add_flag("--force", force, "overwrite an existing store");
    run_cmd->add_option("--method-arg", method_arg_raw,
                        "per-method override, id.key=value (repeatable)");
    run_cmd->add_option("--model-arg", model_arg_raw,
                        "per-model override, id.key=value (repeatable)");

    auto* report_cmd = app.add_subcommand("report", "Render summaries from a record store");
    std::string store_path, view = "summary", format = "csv", mode = "complete", report_out;
    ReportOptions report_options;
    report_cmd->add_option("-s,--store", store_path, "store.jsonl path")->required();
    report_cmd->add_option("--view", view, "summary|heatmap|box")->capture_default_str();
    report_cmd->add_option("--format", format, "csv|json|svg")->capture_default_str();
    report_cmd->add_option("--mode", mode, "record partition: complete|balanced")
        ->capture_default_str();
    report_cmd->add_option("-o,--out", report_out, "output file")->required();
    report_cmd->add_option("--width", report_options.width, "svg width")->capture_default_str();
    report_cmd->add_option("--height", report_options.height, "svg height")
        ->capture_default_str();

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        log::set_level(level_from_name(log_level));

        Registry registry = Registry::with_builtins();
        if (!plugin_dir.empty())
            register_plugins(registry, discover_plugins(plugin_dir, registry), plugin_timeout);

        if (list_cmd->parsed()) return cmd_list(registry, list_all);
        if (describe_cmd->parsed()) return cmd_describe(registry, describe_id);

        if (run_cmd->parsed()) {
            if (!config_file.empty()) {
                RunConfig from_file;
                apply_config_file(config_file, from_file);
                // flags win over config-file values
                if (opt_data->count()) from_file.dataset_paths = cfg.dataset_paths;
                if (opt_label->count()) from_file.label_column = cfg.label_column;
                if (opt_methods->count()) from_file.methods = cfg.methods;
                if (opt_models->count()) from_file.models = cfg.models;
                if (opt_k->count()) from_file.k = cfg.k;
                if (opt_balance->count()) from_file.balance = cfg.balance;
                if (opt_seed->count()) from_file.seed = cfg.seed;
                if (opt_threads->count()) from_file.threads = cfg.threads;
                if (opt_noleak->count()) from_file.no_leakage = cfg.no_leakage;
                if (opt_timings->count()) from_file.store_timings = cfg.store_timings;
                if (opt_out->count()) from_file.output_dir = cfg.output_dir;
                for (auto& [id, kv] : cfg.method_args)
                    for (auto& [k2, v2] : kv) from_file.method_args[id][k2] = v2;
                for (auto& [id, kv] : cfg.model_args)
                    for (auto& [k2, v2] : kv) from_file.model_args[id][k2] = v2;
                cfg = std::move(from_file);
            }
            for (const auto& raw : method_arg_raw)
                parse_scoped_arg(raw, cfg.method_args, "--method-arg");
            for (const auto& raw : model_arg_raw)
                parse_scoped_arg(raw, cfg.model_args, "--model-arg");
            if (cfg.models.empty()) cfg.models = {"knn", "rf", "svm-linear"};
            if (cfg.output_dir.empty())
                throw InvalidConfig("--out is required for run");
            cfg.plugin_timeout_seconds = plugin_timeout;
            return cmd_run(registry, std::move(cfg), force);
        }

        if (report_cmd->parsed())
            return cmd_report(store_path, view, format, mode, report_out, report_options);
    } catch (const Error& e) {
        log::error(e.what());
        return 1;
    } catch (const std::exception& e) {
        log::error(std::string("unexpected: ") + e.what());
        return 1;
    }
    return 0;
}
