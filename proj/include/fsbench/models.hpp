#pragma once

#include "fsbench/dataset.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fsbench {

enum class ModelKind { Knn, RandomForest, LinearSvm };

// CLI/report identifiers: "knn", "rf", "svm-linear". The svm id carries the
// "-linear" suffix on purpose: a linear margin model stands in for the usual
// RBF default and every report should say so.
std::string to_string(ModelKind kind);
ModelKind model_kind_from_id(const std::string& id);
std::string model_description(ModelKind kind);

struct ModelSpec {
    ModelKind kind = ModelKind::Knn;
    std::map<std::string, std::string> hyperparams;
    std::uint64_t seed = 42;

    // Validates hyperparameter keys for the kind (knn: k; rf: trees,
    // bootstrap; svm-linear: c, epochs). Unknown keys are rejected here.
    static ModelSpec make(const std::string& id,
                          std::map<std::string, std::string> hyperparams = {},
                          std::uint64_t seed = 42);
};

// Immutable fitted classifier. score() is a real value, higher = more
// malware-like; predict() is 1 exactly when score passes the kind's
// decision threshold (0.5 for vote fractions, 0 for the SVM margin).
class TrainedModel {
public:
    std::vector<int> predict(const Matrix& rows) const;
    Vector score(const Matrix& rows) const;

    ModelKind kind() const;
    Index input_width() const;

    // LinearSvm only: per-feature weights (used by recursive elimination)
    // and the per-epoch objective values recorded during training.
    const Vector& linear_weights() const;
    const std::vector<double>& objective_trace() const;

    struct State; // opaque fitted state, defined in models.cpp

private:
    friend TrainedModel fit(const ModelSpec&, const Dataset&);
    std::shared_ptr<const State> state_;
};

TrainedModel fit(const ModelSpec& spec, const Dataset& dataset);

} // namespace fsbench
