#include "fsbench/dataset.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace fsbench {

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Permission: return "Permission";
        case FeatureKind::ApiCall: return "ApiCall";
        case FeatureKind::Intent: return "Intent";
        case FeatureKind::OpCode: return "OpCode";
        case FeatureKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

FeatureKind feature_kind_from_code(const std::string& code) {
    if (code == "P") return FeatureKind::Permission;
    if (code == "A") return FeatureKind::ApiCall;
    if (code == "I") return FeatureKind::Intent;
    if (code == "O") return FeatureKind::OpCode;
    return FeatureKind::Unknown;
}

void Dataset::validate_structure() const {
    if (n_rows() < 2 || n_cols() < 1)
        throw Error("InvalidDataset", name + ": needs at least 2 rows and 1 column");
    if (static_cast<Index>(feature_names.size()) != n_cols())
        throw Error("InvalidDataset", name + ": feature_names length mismatch");
    if (labels.size() != n_rows())
        throw Error("InvalidDataset", name + ": labels length mismatch");
    std::unordered_set<std::string> seen;
    for (const auto& fname : feature_names) {
        if (fname.empty())
            throw Error("InvalidDataset", name + ": empty feature name");
        if (!seen.insert(fname).second)
            throw Error("InvalidDataset", name + ": duplicate feature name '" + fname + "'");
    }
    if (feature_kinds && static_cast<Index>(feature_kinds->size()) != n_cols())
        throw Error("InvalidDataset", name + ": feature_kinds length mismatch");
    for (Index i = 0; i < labels.size(); ++i)
        if (labels[i] != 0 && labels[i] != 1)
            throw NonBinaryLabel(name + ": label at row " + std::to_string(i));
}

bool Dataset::has_both_classes() const {
    bool any0 = false, any1 = false;
    for (Index i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? any1 : any0) = true;
    return any0 && any1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_cell(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::numeric_limits<double>::quiet_NaN();
    return value;
}

int parse_label(const std::string& raw, bool map_text, const std::string& context) {
    const std::string s = trim(raw);
    if (map_text) {
        const std::string l = lower(s);
        if (l == "benign") return 0;
        if (l == "malware") return 1;
    }
    if (s == "0") return 0;
    if (s == "1") return 1;
    // tolerate float-ish 0/1 spellings such as "1.0"
    double v = parse_cell(s);
    if (v == 0.0) return 0;
    if (v == 1.0) return 1;
    throw NonBinaryLabel(context + ": label cell '" + s + "'");
}

void format_value(std::ostream& out, double v) {
    if (v == 0.0) { out << '0'; return; }
    if (v == 1.0) { out << '1'; return; }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

} // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("FileNotFound", path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile(path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    if (header.empty()) throw EmptyFile(path);

    Index label_idx = -1;
    std::vector<std::string> names;
    names.reserve(header.size());
    for (size_t i = 0; i < header.size(); ++i) {
        const std::string h = trim(header[i]);
        if (h == options.label_column) {
            if (label_idx >= 0) throw Error("InvalidHeader", path + ": duplicate label column");
            label_idx = static_cast<Index>(i);
        } else {
            names.push_back(h);
        }
    }
    if (label_idx < 0) throw MissingLabelColumn(path + ": no column '" + options.label_column + "'");

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw RaggedRow(path + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
        std::vector<double> row;
        row.reserve(names.size());
        for (size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<Index>(i) == label_idx) continue;
            row.push_back(parse_cell(cells[i]));
        }
        labels.push_back(parse_label(cells[static_cast<size_t>(label_idx)], options.map_text_labels,
                                     path + ": line " + std::to_string(line_no)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyFile(path + ": header only");

    Dataset d;
    d.name = std::filesystem::path(path).stem().string();
    d.feature_names = std::move(names);
    d.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(d.feature_names.size()));
    for (Index r = 0; r < d.features.rows(); ++r)
        for (Index c = 0; c < d.features.cols(); ++c)
            d.features(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    d.labels.resize(static_cast<Index>(labels.size()));
    for (Index r = 0; r < d.labels.size(); ++r) d.labels[r] = labels[static_cast<size_t>(r)];
    return d;
}

void write_csv(const Dataset& dataset, const std::string& path, const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotWritable", path);
    for (const auto& n : dataset.feature_names) out << n << ',';
    out << label_column << '\n';
    for (Index r = 0; r < dataset.n_rows(); ++r) {
        for (Index c = 0; c < dataset.n_cols(); ++c) {
            format_value(out, dataset.features(r, c));
            out << ',';
        }
        out << dataset.labels[r] << '\n';
    }
}

void attach_kinds_sidecar(Dataset& dataset, const std::string& sidecar_path) {
    std::ifstream in(sidecar_path);
    if (!in) throw Error("FileNotFound", sidecar_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("InvalidSidecar", sidecar_path + ": " + e.what());
    }
    if (!j.is_object()) throw Error("InvalidSidecar", sidecar_path + ": expected an object");

    std::vector<FeatureKind> kinds(static_cast<size_t>(dataset.n_cols()), FeatureKind::Unknown);
    size_t matched = 0;
    for (size_t c = 0; c < dataset.feature_names.size(); ++c) {
        auto it = j.find(dataset.feature_names[c]);
        if (it == j.end()) continue;
        kinds[c] = feature_kind_from_code(it->get<std::string>());
        ++matched;
    }
    if (matched == 0)
        log::warn(dataset.name + ": kinds sidecar matched no feature names");
    dataset.feature_kinds = std::move(kinds);
}

std::optional<std::string> default_sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension();
    p += ".kinds.json";
    if (std::filesystem::exists(p)) return p.string();
    return std::nullopt;
}

DatasetMeta meta(const Dataset& dataset) {
    DatasetMeta m;
    m.n_features = dataset.n_cols();
    for (Index i = 0; i < dataset.labels.size(); ++i)
        (dataset.labels[i] == 1 ? m.n_malware : m.n_benign)++;
    if (dataset.feature_kinds) {
        for (FeatureKind k : *dataset.feature_kinds) m.kind_histogram[k]++;
    } else {
        m.kind_histogram[FeatureKind::Unknown] = dataset.n_cols();
    }
    return m;
}

} // namespace fsbench
