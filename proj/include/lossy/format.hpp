#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lossy/error.hpp"

namespace lossy {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Plain numbers or multiples of π: "0.7", "pi", "pi/4", "3pi/4", "-0.5*pi".
inline std::optional<double> parse_angle(std::string_view s) {
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return parse_double(s);
  std::string_view coeff = s.substr(0, pos);
  std::string_view rest = s.substr(pos + 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.remove_suffix(1);
  double c = 1.0;
  if (coeff == "-") {
    c = -1.0;
  } else if (!coeff.empty()) {
    const auto v = parse_double(coeff);
    if (!v) return std::nullopt;
    c = *v;
  }
  double d = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') return std::nullopt;
    const auto v = parse_double(rest.substr(1));
    if (!v || *v == 0.0) return std::nullopt;
    d = *v;
  }
  return c * std::numbers::pi / d;
}

/// Inclusive linear grid "start,stop,count".
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = count == 1 ? start
                          : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    if (count > 1) out.back() = stop;
    return out;
  }
};

/// Parses "S,E,N". Angle-valued grids accept π multiples in S and E.
inline GridSpec parse_grid(std::string_view s, bool angles = false) {
  const auto c1 = s.find(',');
  const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
    throw Error(ErrorKind::InvalidParameter, "grid must be START,STOP,COUNT: '" + std::string(s) + "'");
  }
  auto num = [&](std::string_view part) { return angles ? parse_angle(part) : parse_double(part); };
  const auto start = num(s.substr(0, c1));
  const auto stop = num(s.substr(c1 + 1, c2 - c1 - 1));
  const auto count = parse_double(s.substr(c2 + 1));
  if (!start || !stop || !count) throw Error(ErrorKind::InvalidParameter, "unparsable grid '" + std::string(s) + "'");
  if (*count < 1.0 || std::floor(*count) != *count) throw Error(ErrorKind::InvalidParameter, "grid count must be an integer >= 1");
  if (*start > *stop) throw Error(ErrorKind::InvalidParameter, "grid start must not exceed stop");
  return {*start, *stop, static_cast<std::size_t>(*count)};
}

/// Snaps grid angles that sit within 1e−12 of a multiple of π/4 onto it.
inline std::vector<double> snap_quarter_pi(std::vector<double> thetas) {
  const double q = std::numbers::pi / 4.0;
  for (auto& th : thetas) {
    const double m = std::round(th / q);
    if (std::abs(th - m * q) <= 1e-12 * std::max(1.0, std::abs(th))) th = m * q;
  }
  return thetas;
}

}  // namespace lossy
