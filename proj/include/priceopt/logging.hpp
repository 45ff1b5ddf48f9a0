#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace priceopt {

enum class LogLevel { off = 0, info = 1, debug = 2 };

/// Verbosity from PRICE_OPT_LOG (off|info|debug), parsed once.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PRICE_OPT_LOG");
    if (!env) return LogLevel::off;
    const std::string v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::off;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[price-opt] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[price-opt] " << msg << "\n";
}

}  // namespace priceopt
