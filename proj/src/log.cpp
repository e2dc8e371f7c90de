#include "hdrbench/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace hdrbench {

LogLevel log_threshold() {
    static LogLevel cached = [] {
        const char* env = std::getenv("HDRBENCH_LOG");
        if (!env) return LogLevel::Info;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return cached;
}

void log_message(LogLevel level, const std::string& text) {
    if (level > log_threshold()) return;
    const char* tag = "info";
    switch (level) {
        case LogLevel::Error: tag = "error"; break;
        case LogLevel::Warn: tag = "warn"; break;
        case LogLevel::Info: tag = "info"; break;
        case LogLevel::Debug: tag = "debug"; break;
    }
    std::fprintf(stderr, "[hdrbench %s] %s\n", tag, text.c_str());
}

}  // namespace hdrbench
