#include "icsguard/cost.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace icsguard {

Cost Cost::from_millis(std::int64_t millis) {
  if (millis < 0) {
    throw std::invalid_argument("cost must be non-negative");
  }
  Cost c;
  c.millis_ = millis;
  return c;
}

std::optional<Cost> Cost::parse(std::string_view text) {
  if (text == "inf") {
    return infinite();
  }
  if (text.empty()) {
    return std::nullopt;
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || frac.size() > 3 || (dot != std::string_view::npos && frac.empty())) {
    return std::nullopt;
  }
  std::int64_t units = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
  if (ec != std::errc{} || p != whole.data() + whole.size() || whole.front() == '-' ||
      whole.front() == '+') {
    return std::nullopt;
  }
  std::int64_t fraction = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    fraction *= 10;
    if (i < frac.size()) {
      if (frac[i] < '0' || frac[i] > '9') {
        return std::nullopt;
      }
      fraction += frac[i] - '0';
    }
  }
  if (units > std::numeric_limits<std::int64_t>::max() / kScale - 1) {
    return std::nullopt;
  }
  return from_millis(units * kScale + fraction);
}

std::optional<Cost> Cost::from_double(double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 9.0e15) {
    return std::nullopt;
  }
  const double scaled = value * static_cast<double>(kScale);
  const double rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6 * std::max(1.0, rounded)) {
    return std::nullopt;
  }
  return from_millis(static_cast<std::int64_t>(rounded));
}

std::string Cost::to_string() const {
  if (infinite_) {
    return "inf";
  }
  std::string out = std::to_string(millis_ / kScale);
  std::int64_t frac = millis_ % kScale;
  if (frac != 0) {
    std::string digits = std::to_string(frac + kScale).substr(1);
    while (digits.back() == '0') {
      digits.pop_back();
    }
    out += '.';
    out += digits;
  }
  return out;
}

Cost Cost::operator+(const Cost& other) const {
  if (infinite_ || other.infinite_) {
    return infinite();
  }
  return from_millis(millis_ + other.millis_);
}

Cost Cost::operator*(std::int64_t factor) const {
  if (factor < 0) {
    throw std::invalid_argument("cost scale factor must be non-negative");
  }
  if (infinite_) {
    return factor == 0 ? Cost{} : infinite();
  }
  return from_millis(millis_ * factor);
}

}  // namespace icsguard
