#pragma once

#include <string>
#include <vector>

#include "fsbench/runner.hpp"
#include "fsbench/types.hpp"

namespace fsbench {

// Table-IV-style per-method summary. Metric values are full-precision means;
// 2-decimal rounding happens at emission only.
struct SummaryRow {
    std::string method;
    std::string mode;
    MetricSet mean;      // fold-mean per (dataset, model), then mean of those
    int n_datasets = 0;
};

// Mean MCC per (dataset, method) across models and folds, in percent.
// Missing (dataset, method) cells are NaN (rendered as empty/"--").
struct HeatmapData {
    std::vector<std::string> datasets; // row labels, sorted
    std::vector<std::string> methods;  // column labels, sorted
    Matrix cells;                      // percent, [-100, 100]
};

// Five-number summary of per-(dataset, model) mean F1, one row per method.
struct BoxStats {
    struct Row {
        std::string method;
        double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    };
    std::vector<Row> rows; // sorted by method
};

// mode selects the record partition ("complete" or "balanced"); all three
// throw EmptyStore when no successful record matches.
std::vector<SummaryRow> summarize(const std::vector<EvalRecord>& records,
                                  const std::string& mode);
HeatmapData heatmap(const std::vector<EvalRecord>& records);
BoxStats boxstats(const std::vector<EvalRecord>& records);

struct ReportOptions {
    int width = 900;
    int height = 600;
};

// format is one of csv, json, svg; anything else raises UnknownFormat.
// Emission is byte-stable for identical inputs.
void emit_summary(const std::vector<SummaryRow>& rows, const std::string& format,
                  const std::string& path, const ReportOptions& options = {});
void emit_heatmap(const HeatmapData& data, const std::string& format, const std::string& path,
                  const ReportOptions& options = {});
void emit_boxstats(const BoxStats& stats, const std::string& format, const std::string& path,
                   const ReportOptions& options = {});

} // namespace fsbench
