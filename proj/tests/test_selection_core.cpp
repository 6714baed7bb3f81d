#include "doctest.h"

#include "fsbench/errors.hpp"
#include "fsbench/seeding.hpp"
#include "fsbench/selection.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace fsbench;

TEST_CASE("top_k orders by score and breaks ties toward lower index") {
    FeatureScore ranking;
    ranking.entries = {{0, 1.0}, {1, 2.0}, {2, 1.0}, {3, 0.5}};
    CHECK(top_k(ranking, 1) == std::vector<Index>{1});
    CHECK(top_k(ranking, 2) == std::vector<Index>{1, 0});
    CHECK(top_k(ranking, 3) == std::vector<Index>{1, 0, 2});
    CHECK(top_k(ranking, 4) == std::vector<Index>{1, 0, 2, 3});
    CHECK_THROWS_AS(top_k(ranking, 5), KTooLarge);
    CHECK_THROWS_AS(top_k(ranking, 0), KTooLarge);
}

TEST_CASE("top_k prefixes nest") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        FeatureScore ranking;
        const Index n = 5 + static_cast<Index>(rng() % 20);
        for (Index j = 0; j < n; ++j)
            ranking.entries.push_back({j, std::round(score(rng) * 4.0) / 4.0});
        for (Index k = 2; k <= n; ++k) {
            const auto smaller = top_k(ranking, k - 1);
            const auto larger = top_k(ranking, k);
            const std::set<Index> wide(larger.begin(), larger.end());
            for (Index idx : smaller) CHECK(wide.count(idx) == 1);
        }
    }
}

TEST_CASE("score_of finds entries") {
    FeatureScore ranking;
    ranking.entries = {{2, 0.5}, {7, 0.25}};
    CHECK(ranking.score_of(7).value() == 0.25);
    CHECK_FALSE(ranking.score_of(3).has_value());
}

TEST_CASE("default ordering budget is half the columns, rounded up") {
    CHECK(default_ordering_budget(50) == 25);
    CHECK(default_ordering_budget(17) == 9);
    CHECK(default_ordering_budget(2) == 1);
    CHECK(default_ordering_budget(1) == 1);
}

TEST_CASE("validate_selected rejects empty, duplicate and out-of-range") {
    CHECK_NOTHROW(validate_selected({0, 2, 1}, 3, "t"));
    CHECK_THROWS_AS(validate_selected({}, 3, "t"), EmptySelection);
    CHECK_THROWS_AS(validate_selected({0, 0}, 3, "t"), Error);
    CHECK_THROWS_AS(validate_selected({3}, 3, "t"), IndexOutOfRange);
    CHECK_THROWS_AS(validate_selected({-1}, 3, "t"), IndexOutOfRange);
}

TEST_CASE("apply_selection reorders columns") {
    const Dataset d = testutil::random_binary(10, 4, 3);
    SelectionResult r;
    r.method_id = "t";
    r.selected = {2, 0};
    const Dataset out = apply_selection(d, r);
    CHECK(out.n_cols() == 2);
    CHECK(out.feature_names[0] == "c2");
    CHECK(out.features.col(1) == d.features.col(0));
    CHECK(out.labels == d.labels);
}

TEST_CASE("selector params parse their extras") {
    SelectorParams p;
    p.extra = {{"n", "12"}, {"x", "0.25"}, {"bad", "thing"}};
    CHECK(p.get_int("n", 5) == 12);
    CHECK(p.get_int("missing", 5) == 5);
    CHECK(p.get_real("x", 1.0) == 0.25);
    CHECK(p.get_real("missing", 1.0) == 1.0);
    CHECK_THROWS_AS(p.get_int("bad", 0), InvalidConfig);
    CHECK_THROWS_AS(p.get_real("bad", 0.0), InvalidConfig);

    SelectorParams invalid;
    invalid.k = 0;
    CHECK_THROWS_AS(invalid.validate(), InvalidConfig);
    invalid.k = 3;
    invalid.alpha = 1.5;
    CHECK_THROWS_AS(invalid.validate(), InvalidConfig);
    invalid.alpha = 0.05;
    invalid.lambda = -0.1;
    CHECK_THROWS_AS(invalid.validate(), InvalidConfig);
    invalid.lambda = 0.1;
    CHECK_NOTHROW(invalid.validate());
}

TEST_CASE("registry round-trips a custom ordering method") {
    Registry reg;
    MethodInfo info;
    info.id = "reverse";
    info.description = "scores features by reversed index";
    reg.register_ordering(info, [](const Dataset& d, const SelectorParams&) {
        FeatureScore s;
        for (Index j = 0; j < d.n_cols(); ++j)
            s.entries.push_back({j, static_cast<double>(d.n_cols() - j)});
        return s;
    });

    CHECK(reg.contains("reverse"));
    CHECK(reg.info("reverse").kind == SelectorKind::Ordering);
    CHECK_THROWS_AS(reg.info("nope"), UnknownMethod);

    const Dataset d = testutil::random_binary(12, 6, 1);
    SelectorParams params;
    const SelectionResult half = reg.select("reverse", d, params);
    CHECK(half.selected == std::vector<Index>{0, 1, 2}); // default budget 3
    CHECK(half.params.at("k") == "3");
    CHECK(half.params.at("seed") == "42");
    REQUIRE(half.ranking.has_value());
    CHECK(half.ranking->entries.size() == 6);

    params.k = 2;
    CHECK(reg.select("reverse", d, params).selected == std::vector<Index>{0, 1});
    params.k = 100; // clamped to n_cols
    CHECK(reg.select("reverse", d, params).selected.size() == 6);
    CHECK(reg.select("reverse", d, params).params.at("k") == "6");
}

TEST_CASE("registry wraps selector errors as SelectorFailure") {
    Registry reg;
    MethodInfo info;
    info.id = "fragile";
    reg.register_subset(info, [](const Dataset&, const SelectorParams&) -> SelectionResult {
        throw ConstantLabels("nothing to split");
    });
    const Dataset d = testutil::random_binary(10, 3, 2);
    try {
        reg.select("fragile", d, {});
        FAIL("expected SelectorFailure");
    } catch (const SelectorFailure& e) {
        CHECK(std::string(e.what()).find("ConstantLabels") != std::string::npos);
    }
    CHECK_THROWS_AS(reg.select("ghost", d, {}), UnknownMethod);
}

TEST_CASE("registry rejects malformed selector output") {
    Registry reg;
    MethodInfo info;
    info.id = "liar";
    reg.register_subset(info, [](const Dataset&, const SelectorParams&) {
        SelectionResult r;
        r.selected = {0, 99};
        return r;
    });
    const Dataset d = testutil::random_binary(10, 3, 2);
    CHECK_THROWS_AS(reg.select("liar", d, {}), IndexOutOfRange);
}

TEST_CASE("builtin registry lists the seventeen methods") {
    const Registry reg = Registry::with_builtins();
    const auto visible = reg.list();
    CHECK(visible.size() == 17);
    CHECK(std::is_sorted(visible.begin(), visible.end(),
                         [](const MethodInfo& a, const MethodInfo& b) { return a.id < b.id; }));
    for (const auto& m : visible) {
        CHECK_FALSE(m.description.empty());
        CHECK(m.builtin);
    }

    const auto with_baselines = reg.list(true);
    CHECK(with_baselines.size() == 18);
    CHECK(reg.contains("all_features"));
    CHECK(reg.info("all_features").baseline);

    // ordering/subset split per the method table
    const std::set<std::string> ordering{"chi_square", "info_gain", "mad",
                                        "pearson", "relieff", "rfe"};
    for (const auto& m : visible) {
        const bool expect_ordering = ordering.count(m.id) > 0;
        CHECK(m.kind == (expect_ordering ? SelectorKind::Ordering : SelectorKind::Subset));
    }
}

TEST_CASE("all_features baseline selects every column") {
    const Registry reg = Registry::with_builtins();
    const Dataset d = testutil::random_binary(20, 5, 4);
    const SelectionResult r = reg.select("all_features", d, {});
    CHECK(r.selected.size() == 5);
}

TEST_CASE("seed derivation is stable and sensitive to every part") {
    CHECK(derive_seed(42, "alpha") == derive_seed(42, "alpha"));
    CHECK(derive_seed(42, "alpha") != derive_seed(43, "alpha"));
    CHECK(derive_seed(42, "alpha") != derive_seed(42, "beta"));
    CHECK(derive_seed(42, "a", "b") != derive_seed(42, "b", "a"));
    CHECK(derive_seed(42, "a", std::uint64_t{1}) != derive_seed(42, "a", std::uint64_t{2}));
    CHECK(derive_seed(42, "fold", "x", 3) == derive_seed(42, "fold", "x", 3));

    // distinct enough to use as independent stream seeds
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, "stream", i));
    CHECK(seen.size() == 1000);
}
