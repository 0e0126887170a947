#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace wimaxqoe {

// Simulation time is an integer count of microseconds since the start of the
// run. Durations share the same representation.
using SimTime = std::chrono::microseconds;

inline constexpr SimTime kZeroTime{0};

constexpr double to_seconds(SimTime t) noexcept {
  return static_cast<double>(t.count()) / 1e6;
}

// Rounds half-up to the nearest microsecond.
inline SimTime from_seconds(double seconds) {
  return SimTime{static_cast<std::int64_t>(std::floor(seconds * 1e6 + 0.5))};
}

// "<sec>.<usec>" with exactly six fractional digits; exact for any SimTime.
inline std::string format_seconds(SimTime t) {
  const std::int64_t us = t.count();
  const bool negative = us < 0;
  const std::int64_t mag = negative ? -us : us;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", negative ? "-" : "",
                static_cast<long long>(mag / 1000000),
                static_cast<long long>(mag % 1000000));
  return buf;
}

// Inverse of format_seconds. Accepts "<digits>[.<1..6 digits>]" and rejects
// anything finer than a microsecond.
inline std::optional<SimTime> parse_seconds(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto dot = text.find('.');
  const auto whole = text.substr(0, dot);
  const auto frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || whole.size() > 12) return std::nullopt;
  if (dot != std::string_view::npos && (frac.empty() || frac.size() > 6)) return std::nullopt;

  std::int64_t sec = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') return std::nullopt;
    sec = sec * 10 + (c - '0');
  }
  std::int64_t usec = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    usec *= 10;
    if (i < frac.size()) {
      const char c = frac[i];
      if (c < '0' || c > '9') return std::nullopt;
      usec += c - '0';
    }
  }
  return SimTime{sec * 1000000 + usec};
}

}  // namespace wimaxqoe
