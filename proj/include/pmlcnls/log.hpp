#pragma once

#include <functional>
#include <string>

namespace pmlcnls {

enum class LogLevel { Info, Warning };

using LogSink = std::function<void(LogLevel, const std::string&)>;

/// Replaces the process-wide sink (default: warnings to stderr, info dropped).
void set_log_sink(LogSink sink);
void log_message(LogLevel level, const std::string& text);

}  // namespace pmlcnls
