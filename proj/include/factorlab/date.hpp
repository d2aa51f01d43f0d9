#pragma once

#include <charconv>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "factorlab/error.hpp"

namespace factorlab {

/// Calendar month stored as YYYYMM (e.g. 200401).
class YearMonth {
 public:
  constexpr YearMonth() = default;

  static YearMonth from_int(int yyyymm) {
    const int month = yyyymm % 100;
    if (yyyymm < 100 || month < 1 || month > 12) {
      throw InputError("invalid YYYYMM date: " + std::to_string(yyyymm));
    }
    YearMonth ym;
    ym.value_ = yyyymm;
    return ym;
  }

  // Accepts exactly six digits, surrounding blanks allowed. Anything else is not a date.
  static std::optional<YearMonth> parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
      text.remove_suffix(1);
    if (text.size() != 6) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    if (v % 100 < 1 || v % 100 > 12) return std::nullopt;
    YearMonth ym;
    ym.value_ = v;
    return ym;
  }

  constexpr int yyyymm() const { return value_; }
  constexpr int year() const { return value_ / 100; }
  constexpr int month() const { return value_ % 100; }

  // Months since year 0; consecutive months differ by exactly one.
  constexpr int ordinal() const { return year() * 12 + (month() - 1); }

  YearMonth next() const {
    return month() == 12 ? from_int((year() + 1) * 100 + 1) : from_int(value_ + 1);
  }

  std::string str() const { return std::to_string(value_); }

  constexpr auto operator<=>(const YearMonth&) const = default;

 private:
  int value_ = 190001;
};

}  // namespace factorlab
