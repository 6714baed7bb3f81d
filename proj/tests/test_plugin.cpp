#include "doctest.h"

#include "fsbench/errors.hpp"
#include "fsbench/plugin.hpp"
#include "fsbench/selection.hpp"

#include "test_util.hpp"

#include <filesystem>
#include <fstream>

using namespace fsbench;
using testutil::Scratch;
namespace fs = std::filesystem;

#ifndef FSBENCH_SOURCE_DIR
#error "FSBENCH_SOURCE_DIR must point at the repository root"
#endif

namespace {

const std::string kSourceDir = FSBENCH_SOURCE_DIR;

// scripted plugin written into `root`/`id` with an executable run.py
void make_plugin(const fs::path& root, const std::string& id, const std::string& body,
                 const std::string& manifest = R"({"executable": "run.py"})") {
    const fs::path dir = root / id;
    fs::create_directories(dir);
    std::ofstream(dir / "about.desc") << "test fixture plugin " << id << "\n";
    std::ofstream(dir / "plugin.json") << manifest << "\n";
    const fs::path script = dir / "run.py";
    std::ofstream(script) << "#!/usr/bin/env python3\n" << body;
    fs::permissions(script, fs::perms::owner_all | fs::perms::group_read | fs::perms::others_read,
                    fs::perm_options::replace);
}

const std::string kArgPrefix =
    "import argparse\n"
    "ap = argparse.ArgumentParser()\n"
    "ap.add_argument('--input'); ap.add_argument('--output')\n"
    "a = ap.parse_args()\n";

} // namespace

TEST_CASE("bundled even_columns plugin is discovered") {
    Registry reg = Registry::with_builtins();
    const auto manifests = discover_plugins(kSourceDir + "/plugins", reg);
    REQUIRE(manifests.size() == 1);
    const PluginManifest& m = manifests[0];
    CHECK(m.id == "even_columns");
    CHECK(m.kind == SelectorKind::Subset);
    CHECK(m.description.find("stride") != std::string::npos);
    REQUIRE(m.declared_args.size() == 1);
    CHECK(m.declared_args[0].name == "stride");
    CHECK(m.declared_args[0].type == "int");
    CHECK(m.declared_args[0].default_value == "2");
}

TEST_CASE("even_columns keeps the even-indexed features") {
    Registry reg = Registry::with_builtins();
    const auto manifests = discover_plugins(kSourceDir + "/plugins", reg);
    REQUIRE(manifests.size() == 1);

    const Dataset d = testutil::random_binary(30, 7, 3);
    const SelectionResult r = run_plugin(manifests[0], d, {});
    CHECK(r.selected == std::vector<Index>{0, 2, 4, 6});
    CHECK(r.params.at("stride") == "2");

    const SelectionResult wide = run_plugin(manifests[0], d, {{"stride", "3"}});
    CHECK(wide.selected == std::vector<Index>{0, 3, 6});

    CHECK_THROWS_AS(run_plugin(manifests[0], d, {{"unknown", "1"}}), InvalidConfig);
    CHECK_THROWS_AS(run_plugin(manifests[0], d, {{"stride", "lots"}}), InvalidConfig);
}

TEST_CASE("registered plugins behave like subset methods") {
    Registry reg = Registry::with_builtins();
    register_plugins(reg, discover_plugins(kSourceDir + "/plugins", reg));
    REQUIRE(reg.contains("even_columns"));
    CHECK(reg.info("even_columns").kind == SelectorKind::Subset);
    CHECK_FALSE(reg.info("even_columns").builtin);

    const Dataset d = testutil::random_binary(30, 6, 5);
    SelectorParams params;
    params.extra["stride"] = "2";
    const SelectionResult r = reg.select("even_columns", d, params);
    CHECK(r.selected == std::vector<Index>{0, 2, 4});
    CHECK(r.method_id == "even_columns");
}

TEST_CASE("the malformed fixture plugin violates the protocol") {
    Registry reg;
    const auto manifests = discover_plugins(kSourceDir + "/tests/fixtures/plugins", reg);
    REQUIRE(manifests.size() == 1);
    CHECK(manifests[0].id == "bad_extra_column");

    const Dataset d = testutil::random_binary(20, 4, 7);
    CHECK_THROWS_AS(run_plugin(manifests[0], d, {}), ProtocolViolation);
}

TEST_CASE("discovery skips rejects and collisions") {
    Scratch tmp;
    const fs::path root = tmp.dir / "plugins";

    make_plugin(root, "fine", kArgPrefix + "import shutil\nshutil.copy(a.input, a.output)\n");
    make_plugin(root, "chi_square", kArgPrefix + "import shutil\nshutil.copy(a.input, a.output)\n");
    make_plugin(root, "wrong_kind", "pass\n", R"({"executable": "run.py", "kind": "ordering"})");
    make_plugin(root, "no_json", "pass\n");
    fs::remove(root / "no_json" / "plugin.json");
    make_plugin(root, "no_exe", "pass\n");
    fs::remove(root / "no_exe" / "run.py");
    make_plugin(root, "bad_json", "pass\n", "{ not json");

    Registry reg = Registry::with_builtins();
    const auto manifests = discover_plugins(root.string(), reg);
    REQUIRE(manifests.size() == 1); // chi_square collides with the builtin
    CHECK(manifests[0].id == "fine");

    // nonexistent root: nothing to discover
    CHECK(discover_plugins((tmp.dir / "nowhere").string(), reg).empty());
}

TEST_CASE("crashing plugins surface their stderr") {
    Scratch tmp;
    make_plugin(tmp.dir / "p", "boom",
                kArgPrefix + "import sys\nprint('kaput', file=sys.stderr)\nsys.exit(3)\n");
    Registry reg;
    const auto manifests = discover_plugins((tmp.dir / "p").string(), reg);
    REQUIRE(manifests.size() == 1);
    const Dataset d = testutil::random_binary(10, 3, 1);
    try {
        run_plugin(manifests[0], d, {});
        FAIL("expected PluginCrashed");
    } catch (const PluginCrashed& e) {
        const std::string what = e.what();
        CHECK(what.find("3") != std::string::npos);
        CHECK(what.find("kaput") != std::string::npos);
    }
}

TEST_CASE("protocol violations are rejected one by one") {
    Scratch tmp;
    const fs::path root = tmp.dir / "p";
    const Dataset d = testutil::random_binary(12, 4, 9);
    Registry reg;

    SUBCASE("no output file") {
        make_plugin(root, "silent", kArgPrefix + "pass\n");
        const auto m = discover_plugins(root.string(), reg);
        CHECK_THROWS_AS(run_plugin(m[0], d, {}), ProtocolViolation);
    }
    SUBCASE("row count change") {
        make_plugin(root, "truncates",
                    kArgPrefix +
                        "lines = open(a.input).readlines()\n"
                        "open(a.output, 'w').writelines(lines[:-1])\n");
        const auto m = discover_plugins(root.string(), reg);
        CHECK_THROWS_AS(run_plugin(m[0], d, {}), ProtocolViolation);
    }
    SUBCASE("label tampering") {
        make_plugin(root, "flipper",
                    kArgPrefix +
                        "import csv\n"
                        "rows = list(csv.reader(open(a.input)))\n"
                        "lab = rows[0].index('class')\n"
                        "rows[1][lab] = '1' if rows[1][lab] == '0' else '0'\n"
                        "csv.writer(open(a.output, 'w', newline='')).writerows(rows)\n");
        const auto m = discover_plugins(root.string(), reg);
        CHECK_THROWS_AS(run_plugin(m[0], d, {}), ProtocolViolation);
    }
    SUBCASE("value tampering") {
        make_plugin(root, "rewriter",
                    kArgPrefix +
                        "import csv\n"
                        "rows = list(csv.reader(open(a.input)))\n"
                        "lab = rows[0].index('class')\n"
                        "col = 0 if lab != 0 else 1\n"
                        "rows[1][col] = '1' if rows[1][col] == '0' else '0'\n"
                        "csv.writer(open(a.output, 'w', newline='')).writerows(rows)\n");
        const auto m = discover_plugins(root.string(), reg);
        CHECK_THROWS_AS(run_plugin(m[0], d, {}), ProtocolViolation);
    }
    SUBCASE("drops every feature") {
        make_plugin(root, "nihilist",
                    kArgPrefix +
                        "import csv\n"
                        "rows = list(csv.reader(open(a.input)))\n"
                        "lab = rows[0].index('class')\n"
                        "out = [[row[lab]] for row in rows]\n"
                        "csv.writer(open(a.output, 'w', newline='')).writerows(out)\n");
        const auto m = discover_plugins(root.string(), reg);
        CHECK_THROWS_AS(run_plugin(m[0], d, {}), EmptySelection);
    }
}

TEST_CASE("slow plugins are killed at the deadline") {
    Scratch tmp;
    make_plugin(tmp.dir / "p", "sleeper",
                kArgPrefix + "import time\ntime.sleep(30)\n");
    Registry reg;
    const auto manifests = discover_plugins((tmp.dir / "p").string(), reg);
    REQUIRE(manifests.size() == 1);
    const Dataset d = testutil::random_binary(10, 3, 2);
    CHECK_THROWS_AS(run_plugin(manifests[0], d, {}, 0.4), Timeout);
}
