#include "fsbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/stats.hpp"

namespace fsbench {
namespace {

using json = nlohmann::ordered_json;

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UnwritableOutputDir(path);
    return out;
}

void accumulate(MetricSet& into, const MetricSet& m) {
    into.accuracy += m.accuracy;
    into.precision += m.precision;
    into.recall += m.recall;
    into.f1 += m.f1;
    into.roc_auc += m.roc_auc;
    into.mcc += m.mcc;
}

void divide(MetricSet& m, double n) {
    m.accuracy /= n;
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    m.roc_auc /= n;
    m.mcc /= n;
}

// fold-mean per (method, dataset, model) over successful records
std::map<std::tuple<std::string, std::string, std::string>, MetricSet>
group_means(const std::vector<EvalRecord>& records, const std::string* mode) {
    std::map<std::tuple<std::string, std::string, std::string>, std::pair<MetricSet, int>> acc;
    for (const auto& r : records) {
        if (r.failed()) continue;
        if (mode && r.mode != *mode) continue;
        auto& slot = acc[{r.method, r.dataset, r.model}];
        accumulate(slot.first, r.metrics);
        ++slot.second;
    }
    std::map<std::tuple<std::string, std::string, std::string>, MetricSet> means;
    for (auto& [key, slot] : acc) {
        divide(slot.first, slot.second);
        means[key] = slot.first;
    }
    return means;
}

// two-segment linear ramp: -100 red, 0 near-white, +100 blue
std::string ramp_color(double percent) {
    const int lo[3] = {178, 24, 43};   // #b2182b
    const int mid[3] = {247, 247, 247}; // #f7f7f7
    const int hi[3] = {33, 102, 172};  // #2166ac
    const double v = std::clamp(percent, -100.0, 100.0);
    const int* a = v < 0 ? lo : mid;
    const int* b = v < 0 ? mid : hi;
    const double t = v < 0 ? (v + 100.0) / 100.0 : v / 100.0;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(a[0] + t * (b[0] - a[0])),
                  static_cast<int>(a[1] + t * (b[1] - a[1])),
                  static_cast<int>(a[2] + t * (b[2] - a[2])));
    return buf;
}

} // namespace

std::vector<SummaryRow> summarize(const std::vector<EvalRecord>& records,
                                  const std::string& mode) {
    if (mode != "complete" && mode != "balanced")
        throw InvalidConfig("summarize: mode must be 'complete' or 'balanced'");
    auto means = group_means(records, &mode);
    if (means.empty()) throw EmptyStore("no successful '" + mode + "' records to summarize");

    std::map<std::string, SummaryRow> by_method;
    std::map<std::string, std::set<std::string>> datasets_of;
    std::map<std::string, int> groups_of;
    for (const auto& [key, m] : means) {
        const auto& [method, dataset, model] = key;
        auto& row = by_method[method];
        row.method = method;
        row.mode = mode;
        accumulate(row.mean, m);
        datasets_of[method].insert(dataset);
        ++groups_of[method];
    }
    std::vector<SummaryRow> rows;
    for (auto& [method, row] : by_method) {
        divide(row.mean, groups_of[method]);
        row.n_datasets = static_cast<int>(datasets_of[method].size());
        rows.push_back(std::move(row));
    }
    return rows;
}

HeatmapData heatmap(const std::vector<EvalRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    std::set<std::string> datasets, methods;
    for (const auto& r : records) {
        if (r.failed()) continue;
        auto& slot = acc[{r.dataset, r.method}];
        slot.first += r.metrics.mcc;
        ++slot.second;
        datasets.insert(r.dataset);
        methods.insert(r.method);
    }
    if (acc.empty()) throw EmptyStore("no successful records for a heatmap");

    HeatmapData data;
    data.datasets.assign(datasets.begin(), datasets.end());
    data.methods.assign(methods.begin(), methods.end());
    data.cells = Matrix::Constant(static_cast<Index>(data.datasets.size()),
                                  static_cast<Index>(data.methods.size()),
                                  std::nan(""));
    for (size_t i = 0; i < data.datasets.size(); ++i) {
        for (size_t j = 0; j < data.methods.size(); ++j) {
            auto it = acc.find({data.datasets[i], data.methods[j]});
            if (it == acc.end()) continue;
            data.cells(static_cast<Index>(i), static_cast<Index>(j)) =
                100.0 * it->second.first / it->second.second;
        }
    }
    return data;
}

BoxStats boxstats(const std::vector<EvalRecord>& records) {
    auto means = group_means(records, nullptr);
    if (means.empty()) throw EmptyStore("no successful records for box statistics");

    std::map<std::string, std::vector<double>> f1s;
    for (const auto& [key, m] : means) f1s[std::get<0>(key)].push_back(m.f1);

    BoxStats stats;
    for (auto& [method, values] : f1s) {
        std::sort(values.begin(), values.end());
        BoxStats::Row row;
        row.method = method;
        row.min = values.front();
        row.max = values.back();
        row.q1 = quantile_type7(values, 0.25);
        row.median = quantile_type7(values, 0.5);
        row.q3 = quantile_type7(values, 0.75);
        stats.rows.push_back(std::move(row));
    }
    return stats;
}

// ---------------------------------------------------------------------------
// emission

void emit_summary(const std::vector<SummaryRow>& rows, const std::string& format,
                  const std::string& path, const ReportOptions& options) {
    if (format == "csv") {
        auto out = open_out(path);
        out << "method,mode,f1,recall,accuracy,precision,roc_auc,mcc,n_datasets\n";
        for (const auto& r : rows) {
            out << r.method << ',' << r.mode << ',' << fmt2(r.mean.f1) << ','
                << fmt2(r.mean.recall) << ',' << fmt2(r.mean.accuracy) << ','
                << fmt2(r.mean.precision) << ',' << fmt2(r.mean.roc_auc) << ','
                << fmt2(r.mean.mcc) << ',' << r.n_datasets << '\n';
        }
        return;
    }
    if (format == "json") {
        json doc = json::array();
        for (const auto& r : rows) {
            json row;
            row["method"] = r.method;
            row["mode"] = r.mode;
            row["f1"] = r.mean.f1;
            row["recall"] = r.mean.recall;
            row["accuracy"] = r.mean.accuracy;
            row["precision"] = r.mean.precision;
            row["roc_auc"] = r.mean.roc_auc;
            row["mcc"] = r.mean.mcc;
            row["n_datasets"] = r.n_datasets;
            doc.push_back(std::move(row));
        }
        auto out = open_out(path);
        out << doc.dump(2) << '\n';
        return;
    }
    if (format == "svg") {
        const int rowh = 24;
        const int headery = 40;
        const int width = options.width;
        const int height = headery + rowh * static_cast<int>(rows.size() + 1) + 20;
        const char* cols[] = {"method", "f1",      "recall", "accuracy",
                              "precision", "roc_auc", "mcc",    "n_datasets"};
        const int ncol = 8;
        const int colw = (width - 40) / ncol;
        auto out = open_out(path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\" font-family=\"monospace\" font-size=\"12\">\n";
        out << "<text x=\"20\" y=\"20\">per-method summary (positive class: malware)</text>\n";
        for (int c = 0; c < ncol; ++c)
            out << "<text x=\"" << 20 + c * colw << "\" y=\"" << headery
                << "\" font-weight=\"bold\">" << cols[c] << "</text>\n";
        int y = headery + rowh;
        for (const auto& r : rows) {
            const std::string cells[] = {r.method,
                                         fmt2(r.mean.f1),
                                         fmt2(r.mean.recall),
                                         fmt2(r.mean.accuracy),
                                         fmt2(r.mean.precision),
                                         fmt2(r.mean.roc_auc),
                                         fmt2(r.mean.mcc),
                                         std::to_string(r.n_datasets)};
            for (int c = 0; c < ncol; ++c)
                out << "<text x=\"" << 20 + c * colw << "\" y=\"" << y << "\">"
                    << svg_escape(cells[c]) << "</text>\n";
            y += rowh;
        }
        out << "</svg>\n";
        return;
    }
    throw UnknownFormat("summary format '" + format + "' (use csv, json or svg)");
}

void emit_heatmap(const HeatmapData& data, const std::string& format, const std::string& path,
                  const ReportOptions& options) {
    const Index nr = data.cells.rows();
    const Index nc = data.cells.cols();
    if (format == "csv") {
        auto out = open_out(path);
        out << "dataset";
        for (const auto& m : data.methods) out << ',' << m;
        out << '\n';
        for (Index i = 0; i < nr; ++i) {
            out << data.datasets[static_cast<size_t>(i)];
            for (Index j = 0; j < nc; ++j) {
                out << ',';
                if (!std::isnan(data.cells(i, j))) out << fmt2(data.cells(i, j));
            }
            out << '\n';
        }
        return;
    }
    if (format == "json") {
        json doc;
        doc["metric"] = "mcc_percent";
        doc["datasets"] = data.datasets;
        doc["methods"] = data.methods;
        json cells = json::array();
        for (Index i = 0; i < nr; ++i) {
            json row = json::array();
            for (Index j = 0; j < nc; ++j) {
                if (std::isnan(data.cells(i, j))) row.push_back(nullptr);
                else row.push_back(data.cells(i, j));
            }
            cells.push_back(std::move(row));
        }
        doc["cells"] = std::move(cells);
        auto out = open_out(path);
        out << doc.dump(2) << '\n';
        return;
    }
    if (format == "svg") {
        const int width = options.width;
        const int height = options.height;
        const int left = 140, top = 90, pad = 10;
        const double cw = static_cast<double>(width - left - pad) / std::max<Index>(1, nc);
        const double ch = static_cast<double>(height - top - pad) / std::max<Index>(1, nr);
        auto out = open_out(path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
        out << "<text x=\"10\" y=\"20\">mean MCC % per (dataset, method); positive class: "
               "malware</text>\n";
        for (Index j = 0; j < nc; ++j) {
            const double x = left + (j + 0.5) * cw;
            out << "<text x=\"" << x << "\" y=\"" << top - 8 << "\" text-anchor=\"end\" "
                << "transform=\"rotate(-40 " << x << " " << top - 8 << ")\">"
                << svg_escape(data.methods[static_cast<size_t>(j)]) << "</text>\n";
        }
        for (Index i = 0; i < nr; ++i) {
            out << "<text x=\"" << left - 6 << "\" y=\"" << top + (i + 0.6) * ch
                << "\" text-anchor=\"end\">" << svg_escape(data.datasets[static_cast<size_t>(i)])
                << "</text>\n";
            for (Index j = 0; j < nc; ++j) {
                const double x = left + j * cw;
                const double y = top + i * ch;
                const double v = data.cells(i, j);
                const std::string fill = std::isnan(v) ? "#cccccc" : ramp_color(v);
                out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw
                    << "\" height=\"" << ch << "\" fill=\"" << fill
                    << "\" stroke=\"#ffffff\"/>\n";
                out << "<text x=\"" << x + cw / 2 << "\" y=\"" << y + ch / 2 + 4
                    << "\" text-anchor=\"middle\" fill=\""
                    << (std::isnan(v) || std::abs(v) < 55.0 ? "#000000" : "#ffffff") << "\">"
                    << (std::isnan(v) ? std::string("--") : fmt2(v)) << "</text>\n";
            }
        }
        out << "</svg>\n";
        return;
    }
    throw UnknownFormat("heatmap format '" + format + "' (use csv, json or svg)");
}

void emit_boxstats(const BoxStats& stats, const std::string& format, const std::string& path,
                   const ReportOptions& options) {
    if (format == "csv") {
        auto out = open_out(path);
        out << "method,min,q1,median,q3,max\n";
        for (const auto& r : stats.rows)
            out << r.method << ',' << fmt2(r.min) << ',' << fmt2(r.q1) << ',' << fmt2(r.median)
                << ',' << fmt2(r.q3) << ',' << fmt2(r.max) << '\n';
        return;
    }
    if (format == "json") {
        json doc = json::array();
        for (const auto& r : stats.rows) {
            json row;
            row["method"] = r.method;
            row["min"] = r.min;
            row["q1"] = r.q1;
            row["median"] = r.median;
            row["q3"] = r.q3;
            row["max"] = r.max;
            doc.push_back(std::move(row));
        }
        auto out = open_out(path);
        out << doc.dump(2) << '\n';
        return;
    }
    if (format == "svg") {
        const int width = options.width;
        const int height = options.height;
        const int left = 60, top = 40, bottom = 110, pad = 10;
        const int n = static_cast<int>(stats.rows.size());
        const double bw = static_cast<double>(width - left - pad) / std::max(1, n);
        const double plot_h = height - top - bottom;
        auto ypos = [&](double f1) { return top + (1.0 - f1) * plot_h; };
        auto out = open_out(path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
        out << "<text x=\"10\" y=\"20\">F1 distribution by method (per dataset x model "
               "means)</text>\n";
        for (int g = 0; g <= 4; ++g) {
            const double f1 = g / 4.0;
            out << "<line x1=\"" << left << "\" y1=\"" << ypos(f1) << "\" x2=\""
                << width - pad << "\" y2=\"" << ypos(f1)
                << "\" stroke=\"#dddddd\"/>\n<text x=\"" << left - 8 << "\" y=\""
                << ypos(f1) + 4 << "\" text-anchor=\"end\">" << fmt2(f1) << "</text>\n";
        }
        for (int i = 0; i < n; ++i) {
            const auto& r = stats.rows[static_cast<size_t>(i)];
            const double cx = left + (i + 0.5) * bw;
            const double half = std::min(28.0, bw * 0.3);
            out << "<line x1=\"" << cx << "\" y1=\"" << ypos(r.min) << "\" x2=\"" << cx
                << "\" y2=\"" << ypos(r.max) << "\" stroke=\"#555555\"/>\n";
            out << "<rect x=\"" << cx - half << "\" y=\"" << ypos(r.q3) << "\" width=\""
                << 2 * half << "\" height=\"" << std::max(1.0, ypos(r.q1) - ypos(r.q3))
                << "\" fill=\"#9ecae1\" stroke=\"#333333\"/>\n";
            out << "<line x1=\"" << cx - half << "\" y1=\"" << ypos(r.median) << "\" x2=\""
                << cx + half << "\" y2=\"" << ypos(r.median)
                << "\" stroke=\"#08306b\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << cx << "\" y=\"" << height - bottom + 16
                << "\" text-anchor=\"end\" transform=\"rotate(-40 " << cx << " "
                << height - bottom + 16 << ")\">" << svg_escape(r.method) << "</text>\n";
        }
        out << "</svg>\n";
        return;
    }
    throw UnknownFormat("boxstats format '" + format + "' (use csv, json or svg)");
}

} // namespace fsbench
