#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factorlab/data_ingest.hpp"
#include "factorlab/error.hpp"
#include "factorlab/regression.hpp"

namespace factorlab {

enum class ModelKind { FF3, Carhart4, FF5 };

inline constexpr std::array<ModelKind, 3> kAllModels = {ModelKind::FF3, ModelKind::Carhart4, ModelKind::FF5};

/// A factor model is fixed by its name; the factor list is canonical.
struct ModelSpec {
  ModelKind kind = ModelKind::FF3;

  std::string_view name() const {
    switch (kind) {
      case ModelKind::FF3: return "FF3";
      case ModelKind::Carhart4: return "Carhart4";
      case ModelKind::FF5: return "FF5";
    }
    return "";
  }

  std::vector<std::string> factors() const {
    switch (kind) {
      case ModelKind::FF3: return {"Mkt-RF", "SMB", "HML"};
      case ModelKind::Carhart4: return {"Mkt-RF", "SMB", "HML", "MOM"};
      case ModelKind::FF5: return {"Mkt-RF", "SMB", "HML", "RMW", "CMA"};
    }
    return {};
  }

  bool operator==(const ModelSpec&) const = default;
};

inline ModelSpec parse_model(std::string_view text) {
  const auto key = column_key(text);
  if (key == "FF3") return {ModelKind::FF3};
  if (key == "CARHART4" || key == "C4") return {ModelKind::Carhart4};
  if (key == "FF5") return {ModelKind::FF5};
  throw InputError("unknown model '" + std::string(text) + "' (expected ff3, carhart4 or ff5)");
}

/// Column that backs `factor` for `spec`. The five-factor SMB is used for FF5 when the
/// dataset carries both constructions.
inline const Vector& factor_column(const AlignedDataset& data, const ModelSpec& spec, std::string_view factor) {
  if (spec.kind == ModelKind::FF5 && column_key(factor) == "SMB" && data.has("SMB5")) return data.column("SMB5");
  return data.column(factor);
}

inline Vector excess_return(const AlignedDataset& data, std::string_view sector) {
  const auto& r = data.column(sector);
  const auto& rf = data.column("RF");
  Vector out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] - rf[i];
  return out;
}

/// Response R_i - R_f on the spec's factors, in canonical order, intercept first.
inline DesignMatrix build_design(const AlignedDataset& data, const ModelSpec& spec, std::string_view sector) {
  const auto names = spec.factors();
  std::vector<Vector> cols;
  for (const auto& f : names) cols.push_back(factor_column(data, spec, f));
  return DesignMatrix(names, cols, excess_return(data, sector));
}

struct FactorRegression {
  std::string sector;
  ModelSpec spec;
  RegressionFit fit;
  std::vector<Stars> stars;  // one per coefficient, intercept first
  std::string equation;
};

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  // "-0.0000" reads as a sign flip that is not there.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string term_label(std::string_view factor) {
  return column_key(factor) == "MKTRF" ? "(Rmkt - Rf)" : std::string(factor);
}

}  // namespace detail

/// `Ri - Rf = alpha + b1(Rmkt - Rf) + b2SMB - b3HML ...`; the intercept is printed as
/// its value. Every term is kept, zeros included.
inline std::string format_equation(const FactorRegression& reg, int decimals = 4) {
  const auto& beta = reg.fit.beta;
  std::string out = "Ri - Rf = " + detail::fixed(beta[0], decimals);
  for (std::size_t j = 1; j < beta.size(); ++j) {
    std::string mag = detail::fixed(beta[j], decimals);
    const bool negative = mag.front() == '-';
    if (negative) mag.erase(0, 1);
    out += negative ? " - " : " + ";
    out += mag + detail::term_label(reg.fit.regressors[j - 1]);
  }
  return out;
}

inline FactorRegression fit_factor_model(const AlignedDataset& data, const ModelSpec& spec, std::string_view sector) {
  FactorRegression reg{std::string(sector), spec, ols_fit(build_design(data, spec, sector)), {}, {}};
  for (double p : reg.fit.p_values) reg.stars.push_back(significance(p));
  reg.equation = format_equation(reg, 4);
  return reg;
}

struct ComparisonRow {
  std::string model;
  std::optional<double> r_squared;
  double f_p_value = 1.0;
  double rmse = 0.0;
  double mae = 0.0;
};

struct ComparisonTable {
  std::string sector;
  std::vector<ComparisonRow> rows;
};

/// In-sample goodness of fit for each spec, rows in input order.
inline ComparisonRow comparison_row(const AlignedDataset& data, const FactorRegression& reg) {
  const auto design = build_design(data, reg.spec, reg.sector);
  const auto yhat = predict(reg.fit, design);
  const auto metrics = prediction_metrics(design.y(), yhat);
  return {std::string(reg.spec.name()), metrics.r_squared, reg.fit.f_p_value, metrics.rmse, metrics.mae};
}

inline ComparisonTable compare_models(const AlignedDataset& data, std::span<const ModelSpec> specs,
                                      std::string_view sector) {
  if (specs.empty()) throw InputError("no models to compare");
  ComparisonTable table{std::string(sector), {}};
  for (const auto& spec : specs) table.rows.push_back(comparison_row(data, fit_factor_model(data, spec, sector)));
  return table;
}

}  // namespace factorlab
