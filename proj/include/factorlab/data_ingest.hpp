#pragma once

// Monthly panels in Ken French data-library layout: optional banner text, a header
// row, then `YYYYMM, v1, v2, ...` rows in percent per month. Values <= -99.0 are the
// library's missing-value sentinel.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factorlab/date.hpp"
#include "factorlab/error.hpp"
#include "factorlab/matrix.hpp"

namespace factorlab {

inline constexpr double kMissingSentinel = -99.99;
inline constexpr double kMissingThreshold = -99.0;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Case- and punctuation-insensitive key used to match column names across files,
/// so `HiTec` finds `Hitec` and `Mom` finds `MOM`. UMD/WML are momentum aliases.
inline std::string column_key(std::string_view name) {
  std::string key;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
  }
  if (key == "UMD" || key == "WML") key = "MOM";
  return key;
}

struct Series {
  std::string name;
  Vector values;
  std::vector<bool> missing;

  bool operator==(const Series&) const = default;
};

/// Date-indexed table of monthly series. Immutable once built.
class MonthlyPanel {
 public:
  MonthlyPanel() = default;

  MonthlyPanel(std::vector<YearMonth> dates, std::vector<Series> columns)
      : dates_(std::move(dates)), columns_(std::move(columns)) {
    for (std::size_t i = 1; i < dates_.size(); ++i) {
      if (!(dates_[i - 1] < dates_[i])) {
        throw InputError("panel dates not strictly increasing at " + dates_[i].str());
      }
    }
    std::set<std::string> keys;
    for (auto& col : columns_) {
      if (col.name.empty() || col.name.find(',') != std::string::npos) {
        throw InputError("invalid column name '" + col.name + "'");
      }
      if (!keys.insert(column_key(col.name)).second) {
        throw InputError("duplicate column '" + col.name + "'");
      }
      if (col.values.size() != dates_.size()) {
        throw InputError("column '" + col.name + "' has " + std::to_string(col.values.size()) +
                         " values for " + std::to_string(dates_.size()) + " dates");
      }
      if (col.missing.empty()) col.missing.assign(dates_.size(), false);
      if (col.missing.size() != dates_.size()) {
        throw InputError("column '" + col.name + "' has a mismatched missing mask");
      }
      for (std::size_t i = 0; i < col.values.size(); ++i) {
        if (col.missing[i]) {
          col.values[i] = kMissingSentinel;
        } else if (!std::isfinite(col.values[i])) {
          throw InputError("column '" + col.name + "' has a non-finite value at " + dates_[i].str());
        }
      }
    }
  }

  std::size_t size() const { return dates_.size(); }
  const std::vector<YearMonth>& dates() const { return dates_; }
  const std::vector<Series>& columns() const { return columns_; }

  std::vector<std::string> column_names() const {
    std::vector<std::string> names;
    for (const auto& c : columns_) names.push_back(c.name);
    return names;
  }

  const Series* find(std::string_view name) const {
    const auto key = column_key(name);
    for (const auto& c : columns_) {
      if (column_key(c.name) == key) return &c;
    }
    return nullptr;
  }

  const Series& column(std::string_view name) const {
    if (const auto* s = find(name)) return *s;
    throw InputError("column '" + std::string(name) + "' not found");
  }

  std::size_t missing_count() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += static_cast<std::size_t>(std::count(c.missing.begin(), c.missing.end(), true));
    return n;
  }

  bool operator==(const MonthlyPanel&) const = default;

 private:
  std::vector<YearMonth> dates_;
  std::vector<Series> columns_;
};

/// Parses the first monthly table in `text`. Banner lines are skipped; the header is
/// the last non-blank line before the first `YYYYMM` row, and the table ends at the
/// first line that is not a `YYYYMM` row (French files append annual sections).
/// With `expected_columns`, only those columns are kept, in that order.
inline MonthlyPanel parse_panel_csv(std::istream& in,
                                    const std::optional<std::vector<std::string>>& expected_columns = std::nullopt) {
  std::string line;
  std::string header_line;
  std::size_t header_lineno = 0;
  std::size_t lineno = 0;
  bool in_data = false;
  std::vector<std::string> names;
  std::vector<std::pair<YearMonth, std::size_t>> date_rows;  // date, row index
  std::vector<Vector> values;                                 // per column
  std::vector<std::vector<bool>> missing;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto trimmed = detail::trim(line);
    const auto fields = detail::split_fields(line);
    const auto date = YearMonth::parse(fields.front());

    if (!in_data) {
      if (trimmed.empty()) continue;
      if (!date || fields.size() < 2) {
        header_line = line;
        header_lineno = lineno;
        continue;
      }
      if (header_line.empty()) {
        throw InputError("line " + std::to_string(lineno) + ": data row before any header row");
      }
      // The header may or may not label the date column.
      const auto header = detail::split_fields(header_line);
      const std::size_t first = header.size() + 1 == fields.size() ? 0 : 1;
      for (std::size_t c = first; c < header.size(); ++c) {
        if (header[c].empty()) {
          throw InputError("line " + std::to_string(header_lineno) + ": empty column name at column " +
                           std::to_string(c + 1));
        }
        names.emplace_back(header[c]);
      }
      if (names.empty()) throw InputError("line " + std::to_string(header_lineno) + ": header names no columns");
      values.assign(names.size(), {});
      missing.assign(names.size(), {});
      in_data = true;
    }

    if (!date) break;  // end of the first monthly table
    if (fields.size() != names.size() + 1) {
      throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(names.size() + 1) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
      const auto cell = fields[c + 1];
      if (cell.empty()) {
        values[c].push_back(kMissingSentinel);
        missing[c].push_back(true);
        continue;
      }
      const auto v = detail::parse_double(cell);
      if (!v) {
        throw InputError("line " + std::to_string(lineno) + ", column " + std::to_string(c + 2) + " ('" +
                         names[c] + "'): malformed number '" + std::string(cell) + "'");
      }
      const bool is_missing = *v <= kMissingThreshold;
      values[c].push_back(is_missing ? kMissingSentinel : *v);
      missing[c].push_back(is_missing);
    }
    date_rows.emplace_back(*date, date_rows.size());
  }

  if (date_rows.empty()) throw InputError("no data rows found");

  std::sort(date_rows.begin(), date_rows.end());
  for (std::size_t i = 1; i < date_rows.size(); ++i) {
    if (date_rows[i - 1].first == date_rows[i].first) {
      throw InputError("duplicate date " + date_rows[i].first.str());
    }
  }

  std::vector<YearMonth> dates;
  dates.reserve(date_rows.size());
  for (const auto& [d, _] : date_rows) dates.push_back(d);

  auto build = [&](std::size_t c) {
    Series s{names[c], Vector(dates.size()), std::vector<bool>(dates.size())};
    for (std::size_t i = 0; i < date_rows.size(); ++i) {
      s.values[i] = values[c][date_rows[i].second];
      s.missing[i] = missing[c][date_rows[i].second];
    }
    return s;
  };

  std::vector<Series> columns;
  if (expected_columns) {
    for (const auto& want : *expected_columns) {
      const auto key = column_key(want);
      std::size_t c = 0;
      while (c < names.size() && column_key(names[c]) != key) ++c;
      if (c == names.size()) throw InputError("expected column '" + want + "' not in header");
      columns.push_back(build(c));
    }
  } else {
    for (std::size_t c = 0; c < names.size(); ++c) columns.push_back(build(c));
  }
  return MonthlyPanel(std::move(dates), std::move(columns));
}

inline MonthlyPanel parse_panel_csv(std::string_view text,
                                    const std::optional<std::vector<std::string>>& expected_columns = std::nullopt) {
  std::istringstream in{std::string(text)};
  return parse_panel_csv(in, expected_columns);
}

/// Writes a panel back out as plain CSV; missing cells become -99.99.
inline std::string serialize_panel_csv(const MonthlyPanel& panel) {
  std::string out = "YYYYMM";
  for (const auto& c : panel.columns()) out += "," + c.name;
  out += "\n";
  for (std::size_t i = 0; i < panel.size(); ++i) {
    out += panel.dates()[i].str();
    for (const auto& c : panel.columns()) {
      out += ",";
      out += c.missing[i] ? detail::format_double(kMissingSentinel) : detail::format_double(c.values[i]);
    }
    out += "\n";
  }
  return out;
}

/// Rows with from <= date <= to.
inline MonthlyPanel slice(const MonthlyPanel& panel, YearMonth from, YearMonth to) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    if (from <= panel.dates()[i] && panel.dates()[i] <= to) keep.push_back(i);
  }
  std::vector<YearMonth> dates;
  for (auto i : keep) dates.push_back(panel.dates()[i]);
  std::vector<Series> cols;
  for (const auto& c : panel.columns()) {
    Series s{c.name, {}, {}};
    for (auto i : keep) {
      s.values.push_back(c.values[i]);
      s.missing.push_back(c.missing[i]);
    }
    cols.push_back(std::move(s));
  }
  return MonthlyPanel(std::move(dates), std::move(cols));
}

/// Combines several factor files (e.g. three-factor, five-factor, momentum) on their
/// common dates. The first file to supply a column wins, except SMB: when both a
/// five-factor file (one carrying RMW) and another file supply SMB, the five-factor
/// construction is kept separately as `SMB5`.
inline MonthlyPanel merge_factor_panels(std::span<const MonthlyPanel> panels) {
  if (panels.empty()) throw InputError("no factor panels to merge");
  if (panels.size() == 1) return panels.front();

  std::vector<YearMonth> dates = panels.front().dates();
  for (std::size_t p = 1; p < panels.size(); ++p) {
    std::vector<YearMonth> common;
    std::set_intersection(dates.begin(), dates.end(), panels[p].dates().begin(), panels[p].dates().end(),
                          std::back_inserter(common));
    dates = std::move(common);
  }
  if (dates.empty()) throw InputError("factor files share no dates");

  const bool plain_smb = std::any_of(panels.begin(), panels.end(),
                                     [](const MonthlyPanel& p) { return p.find("SMB") && !p.find("RMW"); });
  std::vector<Series> cols;
  std::set<std::string> seen;
  for (const auto& panel : panels) {
    const bool five_factor = panel.find("RMW") != nullptr;
    const auto sub = slice(panel, dates.front(), dates.back());
    for (const auto& c : sub.columns()) {
      Series s = c;
      if (five_factor && plain_smb && column_key(c.name) == "SMB") s.name = "SMB5";
      if (!seen.insert(column_key(s.name)).second) continue;
      // slice() keeps every date in range; restrict to the intersection.
      Series picked{s.name, {}, {}};
      std::size_t j = 0;
      for (std::size_t i = 0; i < sub.size(); ++i) {
        if (j < dates.size() && sub.dates()[i] == dates[j]) {
          picked.values.push_back(s.values[i]);
          picked.missing.push_back(s.missing[i]);
          ++j;
        }
      }
      cols.push_back(std::move(picked));
    }
  }
  return MonthlyPanel(dates, std::move(cols));
}

/// Factor and sector series on a common, gap-checked date range. No missing cells.
class AlignedDataset {
 public:
  AlignedDataset() = default;
  AlignedDataset(std::vector<YearMonth> dates, std::vector<std::pair<std::string, Vector>> columns)
      : dates_(std::move(dates)), columns_(std::move(columns)) {
    if (dates_.size() < 2) throw InputError("aligned dataset needs at least 2 dates");
    std::set<std::string> keys;
    for (const auto& [name, v] : columns_) {
      if (v.size() != dates_.size()) throw InputError("aligned column '" + name + "' has wrong length");
      if (!keys.insert(column_key(name)).second) throw InputError("column '" + name + "' appears twice");
      for (double x : v) {
        if (!std::isfinite(x)) throw InputError("aligned column '" + name + "' has a non-finite value");
      }
    }
  }

  std::size_t size() const { return dates_.size(); }
  const std::vector<YearMonth>& dates() const { return dates_; }
  const std::vector<std::pair<std::string, Vector>>& columns() const { return columns_; }

  bool has(std::string_view name) const { return lookup(name) != nullptr; }

  const Vector& column(std::string_view name) const {
    if (const auto* v = lookup(name)) return *v;
    throw InputError("required column '" + std::string(name) + "' absent");
  }

  // Months with no gap between consecutive dates.
  bool contiguous(std::size_t first, std::size_t last) const {
    for (std::size_t i = first + 1; i <= last; ++i) {
      if (dates_[i].ordinal() != dates_[i - 1].ordinal() + 1) return false;
    }
    return true;
  }

 private:
  const Vector* lookup(std::string_view name) const {
    const auto key = column_key(name);
    for (const auto& [n, v] : columns_) {
      if (column_key(n) == key) return &v;
    }
    return nullptr;
  }

  std::vector<YearMonth> dates_;
  std::vector<std::pair<std::string, Vector>> columns_;
};

/// Intersects cleaned factor and portfolio panels over [from, to]. A requested
/// endpoint that neither panel contains is an error rather than silently moved.
inline AlignedDataset align_panels(const MonthlyPanel& factors, const MonthlyPanel& portfolios, YearMonth from,
                                   YearMonth to, std::span<const std::string> required = {}) {
  if (to < from) throw InputError("date range is reversed: " + from.str() + " > " + to.str());

  std::vector<YearMonth> common;
  std::set_intersection(factors.dates().begin(), factors.dates().end(), portfolios.dates().begin(),
                        portfolios.dates().end(), std::back_inserter(common));
  std::erase_if(common, [&](YearMonth d) { return d < from || to < d; });
  if (common.empty()) {
    throw InputError("no common dates in requested range " + from.str() + ".." + to.str());
  }
  auto present = [](const MonthlyPanel& p, YearMonth d) {
    return std::binary_search(p.dates().begin(), p.dates().end(), d);
  };
  for (YearMonth endpoint : {from, to}) {
    if (!present(factors, endpoint) && !present(portfolios, endpoint)) {
      throw InputError("requested endpoint " + endpoint.str() + " is in neither input");
    }
  }

  std::vector<std::pair<std::string, Vector>> cols;
  auto take = [&](const MonthlyPanel& panel) {
    for (const auto& c : panel.columns()) {
      Vector v;
      v.reserve(common.size());
      std::size_t i = 0;
      for (YearMonth d : common) {
        while (panel.dates()[i] < d) ++i;
        if (c.missing[i]) throw InputError("column '" + c.name + "' has a missing cell at " + d.str() + "; clean first");
        v.push_back(c.values[i]);
      }
      cols.emplace_back(c.name, std::move(v));
    }
  };
  take(factors);
  take(portfolios);
  AlignedDataset out(std::move(common), std::move(cols));
  for (const auto& name : required) out.column(name);
  return out;
}

}  // namespace factorlab
