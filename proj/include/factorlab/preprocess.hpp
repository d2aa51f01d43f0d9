#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "factorlab/data_ingest.hpp"
#include "factorlab/error.hpp"

namespace factorlab {

inline constexpr double kDefaultOutlierThreshold = 5.0;
inline constexpr std::size_t kLagrangePoints = 4;
inline constexpr double kMadToSigma = 1.4826;

struct FilledCell {
  std::string column;
  YearMonth date;
  bool operator==(const FilledCell&) const = default;
};

struct RemovedOutlier {
  std::string column;
  YearMonth date;
  double original = 0.0;
  bool operator==(const RemovedOutlier&) const = default;
};

struct CleanReport {
  std::vector<FilledCell> filled;
  std::vector<RemovedOutlier> outliers_removed;
};

/// Value of the Lagrange polynomial through up to four nearest observed points
/// (two per side where available, otherwise shifted to the side that has them),
/// evaluated at `index`. Positions are the abscissae.
inline double lagrange_fill_point(std::span<const double> values, const std::vector<bool>& missing,
                                  std::size_t index) {
  if (values.size() != missing.size()) throw InputError("value and mask lengths differ");
  if (index >= values.size()) throw InputError("fill index out of range");
  if (!missing[index]) throw InputError("fill requested for an observed cell");

  std::vector<std::size_t> left, right;  // nearest first
  for (std::size_t i = index; i-- > 0;) {
    if (!missing[i]) left.push_back(i);
    if (left.size() == kLagrangePoints) break;
  }
  for (std::size_t i = index + 1; i < values.size(); ++i) {
    if (!missing[i]) right.push_back(i);
    if (right.size() == kLagrangePoints) break;
  }
  const std::size_t want = std::min(kLagrangePoints, left.size() + right.size());
  if (want == 0) throw InputError("series has no observed points to interpolate from");

  std::size_t n_left = std::min<std::size_t>(2, left.size());
  std::size_t n_right = std::min<std::size_t>(2, right.size());
  while (n_left + n_right < want) {
    if (n_left < left.size()) ++n_left;
    else ++n_right;
  }

  std::vector<std::size_t> nodes(left.begin(), left.begin() + static_cast<std::ptrdiff_t>(n_left));
  nodes.insert(nodes.end(), right.begin(), right.begin() + static_cast<std::ptrdiff_t>(n_right));

  const double x = static_cast<double>(index);
  double result = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double xj = static_cast<double>(nodes[j]);
    double basis = 1.0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      if (m == j) continue;
      const double xm = static_cast<double>(nodes[m]);
      basis *= (x - xm) / (xj - xm);
    }
    result += basis * values[nodes[j]];
  }
  return result;
}

namespace detail {

inline double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

}  // namespace detail

/// Indices whose robust z-score |x - median| / (1.4826 MAD) exceeds `threshold`.
/// A zero MAD falls back to the sample standard deviation.
inline std::vector<std::size_t> flag_outliers(std::span<const double> series,
                                              double threshold = kDefaultOutlierThreshold) {
  if (series.empty()) throw InputError("outlier scan on an empty series");
  if (!(threshold > 0.0)) throw InputError("outlier threshold must be positive");

  const std::vector<double> xs(series.begin(), series.end());
  const double med = detail::median_of(xs);
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = std::abs(xs[i] - med);
  double scale = kMadToSigma * detail::median_of(dev);

  if (scale == 0.0 && xs.size() > 1) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    scale = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }

  std::vector<std::size_t> flagged;
  if (scale == 0.0) return flagged;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (dev[i] > threshold * scale) flagged.push_back(i);
  }
  return flagged;
}

/// Per column: flag outliers once among observed cells, treat them as missing, then
/// fill every missing cell from the remaining observed cells.
inline std::pair<MonthlyPanel, CleanReport> clean_panel(const MonthlyPanel& panel,
                                                        double threshold = kDefaultOutlierThreshold) {
  if (panel.size() == 0) throw InputError("cannot clean an empty panel");
  CleanReport report;
  std::vector<Series> out;

  for (const auto& col : panel.columns()) {
    std::vector<std::size_t> observed;
    Vector observed_values;
    for (std::size_t i = 0; i < col.values.size(); ++i) {
      if (!col.missing[i]) {
        observed.push_back(i);
        observed_values.push_back(col.values[i]);
      }
    }
    if (observed.empty()) throw InputError("column '" + col.name + "' has no observed values");

    std::vector<bool> mask = col.missing;
    for (std::size_t k : flag_outliers(observed_values, threshold)) {
      const std::size_t i = observed[k];
      mask[i] = true;
      report.outliers_removed.push_back({col.name, panel.dates()[i], col.values[i]});
    }
    if (std::all_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
      throw InputError("column '" + col.name + "' is entirely missing or outliers");
    }

    Series cleaned{col.name, col.values, std::vector<bool>(col.values.size(), false)};
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      cleaned.values[i] = lagrange_fill_point(col.values, mask, i);
      report.filled.push_back({col.name, panel.dates()[i]});
    }
    out.push_back(std::move(cleaned));
  }
  return {MonthlyPanel(panel.dates(), std::move(out)), std::move(report)};
}

}  // namespace factorlab
