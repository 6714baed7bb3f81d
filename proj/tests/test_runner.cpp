#include "doctest.h"

#include "fsbench/errors.hpp"
#include "fsbench/runner.hpp"
#include "fsbench/synthetic.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <set>
#include <tuple>

using namespace fsbench;
using testutil::Scratch;

namespace {

std::string planted_csv(const Scratch& tmp, const std::string& name, Index rows,
                        std::uint64_t seed, double class_skew = 0.0) {
    PlantedSpec spec;
    spec.rows = rows;
    spec.informative = 3;
    spec.noise = 7;
    spec.seed = seed;
    Dataset d = make_planted_dataset(spec).data;
    if (class_skew > 0.0) {
        // flip a slice of labels to 0 to unbalance the classes
        const Index cut = static_cast<Index>(class_skew * static_cast<double>(rows));
        for (Index i = 2; i < cut; ++i) d.labels[i] = 0;
    }
    const std::string path = tmp.path(name + ".csv");
    write_csv(d, path);
    return path;
}

RunConfig base_config(const std::string& csv) {
    RunConfig cfg;
    cfg.dataset_paths = {csv};
    cfg.methods = {"chi_square", "mad"};
    cfg.models = {"knn", "svm-linear"};
    cfg.k = 3;
    cfg.seed = 7;
    return cfg;
}

} // namespace

TEST_CASE("evaluate_run produces one record per method-model-fold") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "alpha", 150, 3);
    const RunConfig cfg = base_config(csv);
    const RunResult result = evaluate_run(cfg, Registry::with_builtins());

    CHECK(result.failures == 0);
    REQUIRE(result.records.size() == 2 * 2 * 3);
    for (const auto& r : result.records) {
        CHECK(r.dataset == "alpha");
        CHECK_FALSE(r.failed());
        CHECK(r.mode == "complete");
        CHECK(r.n_selected > 0);
        CHECK(r.metrics.accuracy >= 0.0);
        CHECK(r.metrics.accuracy <= 1.0);
        CHECK(r.metrics.roc_auc >= 0.0);
        CHECK(r.selection_seconds == 0.0); // timings zeroed by default
        CHECK(r.train_seconds == 0.0);
    }

    // sorted by (dataset, method, model, fold)
    auto key = [](const EvalRecord& r) { return std::tie(r.dataset, r.method, r.model, r.fold); };
    for (size_t i = 1; i < result.records.size(); ++i)
        CHECK(key(result.records[i - 1]) < key(result.records[i]));

    // every fold has the same selection for a method (leaky default mode)
    std::set<Index> widths;
    for (const auto& r : result.records)
        if (r.method == "chi_square") widths.insert(r.n_selected);
    CHECK(widths.size() == 1);
}

TEST_CASE("thread count does not change results") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "beta", 120, 5);
    RunConfig cfg = base_config(csv);
    cfg.methods = {"chi_square", "lasso", "semidroid"};
    const RunResult serial = evaluate_run(cfg, Registry::with_builtins());
    cfg.threads = 4;
    const RunResult parallel = evaluate_run(cfg, Registry::with_builtins());

    REQUIRE(serial.records.size() == parallel.records.size());
    const auto store_a = tmp.path("serial.jsonl");
    const auto store_b = tmp.path("parallel.jsonl");
    write_store(store_a, serial.records);
    write_store(store_b, parallel.records);
    CHECK(testutil::slurp(store_a) == testutil::slurp(store_b));
}

TEST_CASE("balance mode undersamples and tags records") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "gamma", 200, 9, 0.35);
    RunConfig cfg = base_config(csv);
    cfg.balance = true;
    const RunResult result = evaluate_run(cfg, Registry::with_builtins());
    CHECK(result.failures == 0);
    for (const auto& r : result.records) CHECK(r.mode == "balanced");
}

TEST_CASE("per-fold selection mode records fold-specific widths") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "delta", 150, 11);
    RunConfig cfg = base_config(csv);
    cfg.methods = {"lasso"};
    cfg.no_leakage = true;
    const RunResult result = evaluate_run(cfg, Registry::with_builtins());
    CHECK(result.failures == 0);
    CHECK(result.records.size() == 2 * 3);
    for (const auto& r : result.records) CHECK(r.n_selected > 0);
}

TEST_CASE("selector failures become records, not aborts") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "epsilon", 120, 13);
    RunConfig cfg = base_config(csv);
    cfg.methods = {"chi_square", "lasso"};
    cfg.method_args["lasso"]["lambda"] = "50"; // kills every coefficient
    const RunResult result = evaluate_run(cfg, Registry::with_builtins());

    CHECK(result.failures > 0);
    bool saw_failure = false, saw_success = false;
    for (const auto& r : result.records) {
        if (r.method == "lasso") {
            CHECK(r.failed());
            CHECK(r.error.find("NoFeatureSurvives") != std::string::npos);
            saw_failure = true;
        }
        if (r.method == "chi_square") {
            CHECK_FALSE(r.failed());
            saw_success = true;
        }
    }
    CHECK(saw_failure);
    CHECK(saw_success);
}

TEST_CASE("method and model ids are validated before any work") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "zeta", 100, 15);
    RunConfig cfg = base_config(csv);
    cfg.methods = {"chi_square", "unheard_of"};
    CHECK_THROWS_AS(evaluate_run(cfg, Registry::with_builtins()), UnknownMethod);

    RunConfig cfg2 = base_config(csv);
    cfg2.models = {"knn", "transformer"};
    CHECK_THROWS_AS(evaluate_run(cfg2, Registry::with_builtins()), InvalidConfig);
}

TEST_CASE("run config validation") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig); // no datasets
    cfg.dataset_paths = {"x.csv"};
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig); // no methods
    cfg.methods = {"mad"};
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig); // no models
    cfg.models = {"knn"};
    CHECK_NOTHROW(cfg.validate());
    cfg.k = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg.k = 5;
    cfg.threads = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("store round-trips every field") {
    Scratch tmp;
    const auto csv = planted_csv(tmp, "eta", 120, 17);
    RunConfig cfg = base_config(csv);
    const RunResult result = evaluate_run(cfg, Registry::with_builtins());

    const auto path = tmp.path("store.jsonl");
    write_store(path, result.records);
    const auto loaded = read_store(path);
    REQUIRE(loaded.size() == result.records.size());
    for (size_t i = 0; i < loaded.size(); ++i) {
        const auto& a = result.records[i];
        const auto& b = loaded[i];
        CHECK(a.dataset == b.dataset);
        CHECK(a.method == b.method);
        CHECK(a.model == b.model);
        CHECK(a.fold == b.fold);
        CHECK(a.mode == b.mode);
        CHECK(a.n_selected == b.n_selected);
        CHECK(a.metrics.accuracy == b.metrics.accuracy); // bit-exact via shortest round-trip
        CHECK(a.metrics.f1 == b.metrics.f1);
        CHECK(a.metrics.mcc == b.metrics.mcc);
        CHECK(a.metrics.roc_auc == b.metrics.roc_auc);
        CHECK(a.error == b.error);
    }

    // a failure line round-trips too
    EvalRecord failed;
    failed.dataset = "eta";
    failed.method = "lasso";
    failed.model = "*";
    failed.error = "SelectorFailure: lasso failed";
    failed.mode = "complete";
    write_store(path, {failed});
    const auto failures = read_store(path);
    REQUIRE(failures.size() == 1);
    CHECK(failures[0].failed());
    CHECK(failures[0].error == failed.error);
}

TEST_CASE("read_store rejects unusable stores") {
    Scratch tmp;
    CHECK_THROWS_AS(read_store(tmp.path("absent.jsonl")), EmptyStore);
    CHECK_THROWS_AS(read_store(tmp.file("empty.jsonl", "")), EmptyStore);
    CHECK_THROWS_AS(read_store(tmp.file("garbage.jsonl", "not json\n")), EmptyStore);
}

TEST_CASE("manifest echoes the run configuration") {
    Scratch tmp;
    RunConfig cfg = base_config(tmp.path("x.csv"));
    cfg.seed = 99;
    const auto path = tmp.path("manifest.json");
    write_manifest(path, cfg);
    const std::string text = testutil::slurp(path);
    CHECK(text.find("\"seed\": 99") != std::string::npos);
    CHECK(text.find("chi_square") != std::string::npos);
    CHECK(text.find("fsbench") != std::string::npos);
}

TEST_CASE("aggregate groups successful records") {
    std::vector<EvalRecord> records;
    for (int fold = 0; fold < 2; ++fold) {
        EvalRecord r;
        r.dataset = "d1";
        r.method = "m1";
        r.model = "knn";
        r.fold = fold;
        r.mode = "complete";
        r.metrics.f1 = fold == 0 ? 0.8 : 0.6;
        r.metrics.accuracy = fold == 0 ? 0.9 : 0.7;
        records.push_back(r);
    }
    EvalRecord other = records[0];
    other.method = "m2";
    other.metrics.f1 = 1.0;
    records.push_back(other);
    EvalRecord broken = records[0];
    broken.method = "m2";
    broken.error = "boom";
    records.push_back(broken);

    const auto rows = aggregate(records, {"method"});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].keys.at("method") == "m1");
    CHECK(rows[0].mean.f1 == doctest::Approx(0.7));
    CHECK(rows[0].mean.accuracy == doctest::Approx(0.8));
    CHECK(rows[0].count == 2);
    CHECK(rows[1].keys.at("method") == "m2");
    CHECK(rows[1].mean.f1 == doctest::Approx(1.0));
    CHECK(rows[1].count == 1); // failure skipped

    CHECK_THROWS_AS(aggregate(records, {"nonsense"}), InvalidConfig);
}

TEST_CASE("two datasets interleave correctly") {
    Scratch tmp;
    const auto csv1 = planted_csv(tmp, "one", 100, 19);
    const auto csv2 = planted_csv(tmp, "two", 100, 23);
    RunConfig cfg = base_config(csv1);
    cfg.dataset_paths = {csv1, csv2};
    cfg.methods = {"mad"};
    cfg.models = {"knn"};
    const RunResult result = evaluate_run(cfg, Registry::with_builtins());
    CHECK(result.records.size() == 2 * 3);
    std::set<std::string> names;
    for (const auto& r : result.records) names.insert(r.dataset);
    CHECK(names == std::set<std::string>{"one", "two"});
}
