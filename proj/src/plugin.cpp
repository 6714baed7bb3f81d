#include "fsbench/plugin.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"

namespace fsbench {
namespace fs = std::filesystem;

namespace {

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trimmed(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    size_t start = 0;
    while (start < s.size() && is_space(s[start])) ++start;
    return s.substr(start);
}

bool parse_manifest_json(const fs::path& file, PluginManifest& m, std::string& why) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(file));
    } catch (const nlohmann::json::parse_error& e) {
        why = std::string("plugin.json is not valid JSON: ") + e.what();
        return false;
    }
    if (!doc.is_object() || !doc.contains("executable") || !doc["executable"].is_string()) {
        why = "plugin.json must be an object with an \"executable\" string";
        return false;
    }
    m.executable = doc["executable"].get<std::string>();
    if (doc.contains("kind")) {
        const std::string kind = doc["kind"].get<std::string>();
        if (kind != "subset") {
            // the subprocess protocol can only express subsets
            why = "unsupported kind '" + kind + "' (plugins are subset methods)";
            return false;
        }
    }
    if (doc.contains("id") && doc["id"].is_string() &&
        doc["id"].get<std::string>() != m.id) {
        log::warn("plugin '" + m.id + "': plugin.json id '" + doc["id"].get<std::string>() +
                  "' ignored; the directory name is authoritative");
    }
    if (doc.contains("args")) {
        if (!doc["args"].is_array()) {
            why = "plugin.json \"args\" must be an array";
            return false;
        }
        for (const auto& a : doc["args"]) {
            PluginArg arg;
            if (!a.is_object() || !a.contains("name")) {
                why = "each args entry needs a \"name\"";
                return false;
            }
            arg.name = a["name"].get<std::string>();
            arg.type = a.value("type", "text");
            if (arg.type != "int" && arg.type != "real" && arg.type != "text" &&
                arg.type != "flag") {
                why = "arg '" + arg.name + "' has unknown type '" + arg.type + "'";
                return false;
            }
            if (a.contains("default")) {
                const auto& d = a["default"];
                arg.default_value = d.is_string() ? d.get<std::string>() : d.dump();
            }
            m.declared_args.push_back(std::move(arg));
        }
    }
    return true;
}

void check_arg_value(const PluginArg& decl, const std::string& value) {
    try {
        size_t pos = 0;
        if (decl.type == "int") {
            (void)std::stol(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
        } else if (decl.type == "real") {
            (void)std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
        } else if (decl.type == "flag") {
            if (value != "true" && value != "false" && value != "1" && value != "0")
                throw std::invalid_argument(value);
        }
    } catch (const std::exception&) {
        throw InvalidConfig("plugin arg '" + decl.name + "' expects " + decl.type + ", got '" +
                            value + "'");
    }
}

struct TempDir {
    fs::path path;

    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "fsbench-plugin-XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data())) throw UnwritableOutputDir(tmpl);
        path = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

// fork/exec with stdout+stderr captured to files; returns exit status,
// throws Timeout after killing the child.
int run_child(const std::string& exe, const std::vector<std::string>& args,
              const fs::path& stdout_file, const fs::path& stderr_file,
              double timeout_seconds) {
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(exe.c_str()));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) throw PluginCrashed("fork failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        const int out = open(stdout_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int err = open(stderr_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (out >= 0) dup2(out, STDOUT_FILENO);
        if (err >= 0) dup2(err, STDERR_FILENO);
        execv(exe.c_str(), argv.data());
        // exec failed
        std::perror("execv");
        _exit(127);
    }

    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
    int status = 0;
    for (;;) {
        const pid_t done = waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) throw PluginCrashed("waitpid failed: " + std::string(std::strerror(errno)));
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            throw Timeout(exe + " exceeded " + std::to_string(timeout_seconds) + "s");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (WIFSIGNALED(status))
        throw PluginCrashed(exe + " killed by signal " + std::to_string(WTERMSIG(status)));
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tail_of(const fs::path& file, size_t max_bytes = 400) {
    std::string text = trimmed(read_text_file(file));
    if (text.size() > max_bytes) text = "..." + text.substr(text.size() - max_bytes);
    return text;
}

} // namespace

std::vector<PluginManifest> discover_plugins(const std::string& root, const Registry& registry) {
    std::vector<PluginManifest> found;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        log::warn("plugin root '" + root + "' is not a directory; no plugins loaded");
        return found;
    }

    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root, ec))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());

    for (const auto& dir : dirs) {
        const std::string id = dir.filename().string();
        const fs::path desc = dir / "about.desc";
        const fs::path manifest_file = dir / "plugin.json";
        if (!fs::exists(desc) || !fs::exists(manifest_file)) {
            log::warn("plugin '" + id + "' skipped: needs both about.desc and plugin.json");
            continue;
        }
        PluginManifest m;
        m.id = id;
        m.directory = fs::absolute(dir).string();
        m.description = trimmed(read_text_file(desc));
        std::string why;
        if (!parse_manifest_json(manifest_file, m, why)) {
            log::warn("plugin '" + id + "' skipped: " + why);
            continue;
        }
        const fs::path exe = dir / m.executable;
        if (!fs::exists(exe)) {
            log::warn("plugin '" + id + "' skipped: executable '" + m.executable +
                      "' not found");
            continue;
        }
        if (registry.contains(id) ||
            std::any_of(found.begin(), found.end(),
                        [&](const PluginManifest& p) { return p.id == id; })) {
            log::error("plugin '" + id + "' skipped: id collides with a registered method");
            continue;
        }
        found.push_back(std::move(m));
    }
    return found;
}

SelectionResult run_plugin(const PluginManifest& manifest, const Dataset& dataset,
                           const std::map<std::string, std::string>& args,
                           double timeout_seconds) {
    // validate args against the declaration, apply defaults
    std::map<std::string, std::string> effective;
    for (const auto& decl : manifest.declared_args)
        if (!decl.default_value.empty()) effective[decl.name] = decl.default_value;
    for (const auto& [key, value] : args) {
        const auto decl = std::find_if(manifest.declared_args.begin(),
                                       manifest.declared_args.end(),
                                       [&](const PluginArg& a) { return a.name == key; });
        if (decl == manifest.declared_args.end())
            throw InvalidConfig("plugin '" + manifest.id + "' declares no arg '" + key + "'");
        check_arg_value(*decl, value);
        effective[key] = value;
    }

    TempDir tmp;
    const fs::path input = tmp.path / "input.csv";
    const fs::path output = tmp.path / "output.csv";
    write_csv(dataset, input.string());

    std::vector<std::string> argv = {"--input", input.string(), "--output", output.string()};
    for (const auto& [key, value] : effective) {
        const auto decl = std::find_if(manifest.declared_args.begin(),
                                       manifest.declared_args.end(),
                                       [&](const PluginArg& a) { return a.name == key; });
        if (decl != manifest.declared_args.end() && decl->type == "flag") {
            if (value == "true" || value == "1") argv.push_back("--" + key);
        } else {
            argv.push_back("--" + key);
            argv.push_back(value);
        }
    }

    const std::string exe = (fs::path(manifest.directory) / manifest.executable).string();
    const fs::path child_out = tmp.path / "stdout.txt";
    const fs::path child_err = tmp.path / "stderr.txt";
    const int exit_code = run_child(exe, argv, child_out, child_err, timeout_seconds);
    if (exit_code != 0) {
        std::string detail = tail_of(child_err);
        throw PluginCrashed("plugin '" + manifest.id + "' exited with code " +
                            std::to_string(exit_code) +
                            (detail.empty() ? "" : " (stderr: " + detail + ")"));
    }
    if (!fs::exists(output))
        throw ProtocolViolation("plugin '" + manifest.id + "' wrote no output file");

    Dataset reduced;
    try {
        reduced = load_csv(output.string());
    } catch (const Error& e) {
        throw ProtocolViolation("plugin '" + manifest.id + "' output unreadable: " + e.what());
    }

    if (reduced.n_rows() != dataset.n_rows())
        throw ProtocolViolation("plugin '" + manifest.id + "' changed the row count (" +
                                std::to_string(dataset.n_rows()) + " -> " +
                                std::to_string(reduced.n_rows()) + ")");
    for (Index r = 0; r < dataset.n_rows(); ++r)
        if (reduced.labels[r] != dataset.labels[r])
            throw ProtocolViolation("plugin '" + manifest.id +
                                    "' altered or reordered labels at row " + std::to_string(r));

    // map surviving names back to original indices
    std::map<std::string, Index> original;
    for (Index j = 0; j < dataset.n_cols(); ++j) original[dataset.feature_names[static_cast<size_t>(j)]] = j;

    SelectionResult result;
    result.method_id = manifest.id;
    for (Index j = 0; j < reduced.n_cols(); ++j) {
        const std::string& name = reduced.feature_names[static_cast<size_t>(j)];
        const auto it = original.find(name);
        if (it == original.end())
            throw ProtocolViolation("plugin '" + manifest.id + "' output column '" + name +
                                    "' does not exist in the input");
        if ((reduced.features.col(j).array() != dataset.features.col(it->second).array()).any())
            throw ProtocolViolation("plugin '" + manifest.id + "' altered values in column '" +
                                    name + "'");
        result.selected.push_back(it->second);
    }
    if (result.selected.empty())
        throw EmptySelection("plugin '" + manifest.id + "' dropped every feature column");
    for (const auto& [key, value] : effective) result.params[key] = value;
    return result;
}

void register_plugins(Registry& registry, const std::vector<PluginManifest>& manifests,
                      double timeout_seconds) {
    for (const auto& manifest : manifests) {
        MethodInfo info;
        info.id = manifest.id;
        info.kind = SelectorKind::Subset;
        info.description = manifest.description;
        info.builtin = false;
        registry.register_subset(info, [manifest, timeout_seconds](const Dataset& d,
                                                                   const SelectorParams& p) {
            return run_plugin(manifest, d, p.extra, timeout_seconds);
        });
        log::info("registered plugin method '" + manifest.id + "'");
    }
}

} // namespace fsbench
