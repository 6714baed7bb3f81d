#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace fsbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// Static-feature categories of the input datasets. Unknown is used when no
// sidecar metadata is available.
enum class FeatureKind : std::uint8_t { Permission, ApiCall, Intent, OpCode, Unknown };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_code(const std::string& code);

} // namespace fsbench
