#pragma once

namespace fsbench {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fsbench
