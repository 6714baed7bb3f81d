#include "fsbench/log.hpp"

#include <fstream>
#include <iostream>
#include <mutex>

namespace fsbench::log {

namespace {

std::mutex g_mutex;
Level g_level = Level::Info;
std::ofstream g_sink;

const char* tag(Level level) {
    switch (level) {
        case Level::Debug: return "debug";
        case Level::Info: return "info";
        case Level::Warn: return "warn";
        case Level::Error: return "error";
    }
    return "?";
}

} // namespace

void set_level(Level level) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_level = level;
}

void set_sink_file(const std::string& path) {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_sink.is_open()) g_sink.close();
    if (!path.empty()) g_sink.open(path, std::ios::app);
}

void write(Level level, const std::string& message) {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (level < g_level) return;
    std::cerr << "[" << tag(level) << "] " << message << "\n";
    if (g_sink.is_open()) g_sink << "[" << tag(level) << "] " << message << "\n" << std::flush;
}

void debug(const std::string& message) { write(Level::Debug, message); }
void info(const std::string& message) { write(Level::Info, message); }
void warn(const std::string& message) { write(Level::Warn, message); }
void error(const std::string& message) { write(Level::Error, message); }

} // namespace fsbench::log
