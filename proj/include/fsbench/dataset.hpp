#pragma once

#include "fsbench/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fsbench {

// One binary tabular dataset: rows are app samples, columns are static
// features, labels are 0 = benign / 1 = malware. Values are stored as double
// so unparseable cells can travel as NaN until drop_nan_rows runs. Instances
// are treated as immutable once built and may be shared across threads.
struct Dataset {
    std::string name;
    Matrix features;                                 // n_rows x n_cols
    std::vector<std::string> feature_names;          // size n_cols, unique
    std::optional<std::vector<FeatureKind>> feature_kinds; // size n_cols when present
    IntVector labels;                                // size n_rows, values in {0,1}

    Index n_rows() const { return features.rows(); }
    Index n_cols() const { return features.cols(); }

    // Throws if the structural invariants do not hold (unique non-empty
    // feature names, consistent dimensions, labels in {0,1}).
    void validate_structure() const;
    bool has_both_classes() const;
};

struct DatasetMeta {
    Index n_malware = 0;
    Index n_benign = 0;
    Index n_features = 0;
    std::map<FeatureKind, Index> kind_histogram;
};

struct CsvOptions {
    std::string label_column = "class";
    // When true, textual labels "benign"/"malware" (case-insensitive) are
    // mapped to 0/1. Numeric 0/1 labels are always accepted.
    bool map_text_labels = false;
};

// Parses a UTF-8 comma-separated file with a mandatory header. All non-label
// columns become features in header order; cells that do not parse as numbers
// are recorded as NaN. The dataset name is the file stem.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

// Writes the dataset in the same wire format load_csv reads. {0,1} cells are
// emitted as "0"/"1" so a load/write cycle is bit-exact for binary data;
// other values use shortest round-trip formatting.
void write_csv(const Dataset& dataset, const std::string& path,
               const std::string& label_column = "class");

// Reads "<dataset>.kinds.json" (feature_name -> "P"|"A"|"I"|"O") and attaches
// kinds to the dataset. Names absent from the map become Unknown.
void attach_kinds_sidecar(Dataset& dataset, const std::string& sidecar_path);

// Looks for "<csv path minus extension>.kinds.json" next to the dataset file.
std::optional<std::string> default_sidecar_path(const std::string& csv_path);

DatasetMeta meta(const Dataset& dataset);

} // namespace fsbench
