#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace sialign {

using WarningSink = std::function<void(const std::string&)>;

namespace detail {
inline WarningSink& warning_sink() {
  static WarningSink sink = [](const std::string& msg) { std::clog << "warning: " << msg << '\n'; };
  return sink;
}
inline std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Replaces the process-wide warning sink and returns the previous one.
inline WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(detail::warning_mutex());
  auto previous = std::move(detail::warning_sink());
  detail::warning_sink() = std::move(sink);
  return previous;
}

inline void warn(const std::string& message) {
  std::lock_guard lock(detail::warning_mutex());
  if (detail::warning_sink()) detail::warning_sink()(message);
}

}  // namespace sialign
