#pragma once

#include <cstdio>

namespace navrl::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

inline Level& threshold() {
  static Level t = Level::kInfo;
  return t;
}

template <typename... Args>
void emit(Level level, const char* fmt, Args... args) {
  if (level < threshold()) return;
  const char* tag = level == Level::kDebug  ? "debug"
                    : level == Level::kInfo ? "info"
                    : level == Level::kWarn ? "warn"
                                            : "error";
  std::fprintf(stderr, "[%s] ", tag);
  if constexpr (sizeof...(Args) == 0) {
    std::fputs(fmt, stderr);
  } else {
    std::fprintf(stderr, fmt, args...);
  }
  std::fputc('\n', stderr);
}

template <typename... Args>
void debug(const char* fmt, Args... args) { emit(Level::kDebug, fmt, args...); }
template <typename... Args>
void info(const char* fmt, Args... args) { emit(Level::kInfo, fmt, args...); }
template <typename... Args>
void warn(const char* fmt, Args... args) { emit(Level::kWarn, fmt, args...); }
template <typename... Args>
void error(const char* fmt, Args... args) { emit(Level::kError, fmt, args...); }

}  // namespace navrl::log
