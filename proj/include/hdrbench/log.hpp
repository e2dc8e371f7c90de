#pragma once

#include <string>

namespace hdrbench {

// Verbosity is controlled solely by the HDRBENCH_LOG environment variable:
// error, warn, info (default) or debug.
enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_threshold();

void log_message(LogLevel level, const std::string& text);

inline void log_error(const std::string& text) { log_message(LogLevel::Error, text); }
inline void log_warn(const std::string& text) { log_message(LogLevel::Warn, text); }
inline void log_info(const std::string& text) { log_message(LogLevel::Info, text); }
inline void log_debug(const std::string& text) { log_message(LogLevel::Debug, text); }

}  // namespace hdrbench
