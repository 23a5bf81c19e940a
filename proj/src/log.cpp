#include "pmlcnls/log.hpp"

#include <iostream>
#include <mutex>

namespace pmlcnls {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s = [](LogLevel level, const std::string& text) {
    if (level == LogLevel::Warning) std::cerr << "warning: " << text << '\n';
  };
  return s;
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void log_message(LogLevel level, const std::string& text) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(level, text);
}

}  // namespace pmlcnls
