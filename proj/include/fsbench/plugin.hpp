#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsbench/dataset.hpp"
#include "fsbench/selection.hpp"

namespace fsbench {

struct PluginArg {
    std::string name;
    std::string type = "text"; // int | real | text | flag
    std::string default_value;
};

// One plugin = one directory: <root>/<id>/about.desc (plain-text description),
// <root>/<id>/plugin.json (manifest), and the executable named there.
struct PluginManifest {
    std::string id;          // directory name
    SelectorKind kind = SelectorKind::Subset;
    std::string description; // about.desc contents
    std::string directory;   // absolute plugin directory
    std::string executable;  // relative to directory
    std::vector<PluginArg> declared_args;
};

// Best-effort scan: malformed directories are skipped with a warning, ids
// colliding with already-registered methods are skipped with an error log.
std::vector<PluginManifest> discover_plugins(const std::string& root, const Registry& registry);

// Subprocess protocol: the dataset is written as CSV to a temp file, the
// executable runs with --input <csv> --output <csv> plus the declared args,
// and the selection is derived from the surviving column names. The output
// must keep rows, labels and column values identical.
SelectionResult run_plugin(const PluginManifest& manifest, const Dataset& dataset,
                           const std::map<std::string, std::string>& args,
                           double timeout_seconds = 3600.0);

// Wires each manifest into the registry as a subset method whose args come
// from SelectorParams.extra (validated against declared_args).
void register_plugins(Registry& registry, const std::vector<PluginManifest>& manifests,
                      double timeout_seconds = 3600.0);

} // namespace fsbench
