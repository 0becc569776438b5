#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string_view>

namespace rootcause::log {

enum class Level { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kOff = 4 };

using Sink = std::function<void(Level, std::string_view)>;

namespace detail {

struct State {
  std::mutex mutex;
  Level threshold = Level::kWarning;
  Sink sink;
};

inline State& state() {
  static State s;
  return s;
}

inline const char* level_name(Level level) {
  switch (level) {
    case Level::kDebug:
      return "debug";
    case Level::kInfo:
      return "info";
    case Level::kWarning:
      return "warning";
    case Level::kError:
      return "error";
    default:
      return "";
  }
}

}  // namespace detail

inline void set_level(Level level) {
  auto& s = detail::state();
  std::lock_guard lock(s.mutex);
  s.threshold = level;
}

/// Replaces the default stderr sink. Pass an empty function to restore it.
inline void set_sink(Sink sink) {
  auto& s = detail::state();
  std::lock_guard lock(s.mutex);
  s.sink = std::move(sink);
}

inline void write(Level level, std::string_view message) {
  auto& s = detail::state();
  std::lock_guard lock(s.mutex);
  if (level < s.threshold) return;
  if (s.sink) {
    s.sink(level, message);
  } else {
    std::clog << "[rootcause " << detail::level_name(level) << "] " << message << '\n';
  }
}

inline void debug(std::string_view m) { write(Level::kDebug, m); }
inline void info(std::string_view m) { write(Level::kInfo, m); }
inline void warn(std::string_view m) { write(Level::kWarning, m); }

}  // namespace rootcause::log
