#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace siov {

enum class LogLevel : int { Debug = 0, Info = 1, Warn = 2, Off = 3 };

/// Diagnostic verbosity from SIM_LOG=debug|info|warn (default: warn).
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SIM_LOG");
    const std::string v = env ? env : "";
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    if (v == "warn" || v.empty()) return LogLevel::Warn;
    return LogLevel::Warn;
  }();
  return level;
}

}  // namespace siov

#define SIOV_LOG_DEBUG(expr)                                            \
  do {                                                                  \
    if (::siov::log_level() <= ::siov::LogLevel::Debug)                 \
      std::cerr << "[debug] " << expr << "\n";                          \
  } while (0)

#define SIOV_LOG_INFO(expr)                                             \
  do {                                                                  \
    if (::siov::log_level() <= ::siov::LogLevel::Info)                  \
      std::cerr << "[info] " << expr << "\n";                           \
  } while (0)

#define SIOV_LOG_WARN(expr)                                             \
  do {                                                                  \
    if (::siov::log_level() <= ::siov::LogLevel::Warn)                  \
      std::cerr << "[warn] " << expr << "\n";                           \
  } while (0)
