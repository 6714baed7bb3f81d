#pragma once

#include <string>

namespace fsbench::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3 };

// Messages go to stderr and, when a sink file is set, to that file as well.
// Machine-readable outputs never go through here.
void set_level(Level level);
void set_sink_file(const std::string& path); // empty path detaches the sink
void write(Level level, const std::string& message);

void debug(const std::string& message);
void info(const std::string& message);
void warn(const std::string& message);
void error(const std::string& message);

} // namespace fsbench::log
