#pragma once

// End-to-end run: ingest -> clean -> align -> factor fits -> comparison -> LSTM,
// collected into a Report that renders as schema-stable JSON or as Markdown tables.

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorlab/data_ingest.hpp"
#include "factorlab/error.hpp"
#include "factorlab/factor_models.hpp"
#include "factorlab/lstm.hpp"
#include "factorlab/preprocess.hpp"
#include "factorlab/regression.hpp"

namespace factorlab {

inline constexpr std::string_view kReportSchema = "factorlab.report/1";
inline constexpr double kPValueFloor = 1e-300;

enum class ReportFormat { Json, Markdown };

inline ReportFormat parse_format(std::string_view s) {
  const auto key = column_key(s);
  if (key == "JSON") return ReportFormat::Json;
  if (key == "MARKDOWN" || key == "MD") return ReportFormat::Markdown;
  throw InputError("unknown report format '" + std::string(s) + "' (expected json or markdown)");
}

struct RunConfig {
  std::vector<std::string> factor_paths;
  std::string portfolio_path;
  YearMonth from = YearMonth::from_int(200401);
  YearMonth to = YearMonth::from_int(202401);
  std::vector<std::string> sectors = {"Manuf", "Hitec", "Other"};
  std::vector<ModelSpec> models = {{ModelKind::FF3}, {ModelKind::Carhart4}, {ModelKind::FF5}};
  double outlier_threshold = kDefaultOutlierThreshold;
  lstm::TrainConfig lstm;
  std::string command = "report";
  bool include_coefficients = true;
  bool include_comparison = true;
  bool include_lstm = true;
  std::optional<std::string> model_dir;  // where trained LSTM models are written, if anywhere

  void validate() const {
    if (factor_paths.empty()) throw InputError("no factor file given");
    for (const auto& p : factor_paths) {
      if (p.empty()) throw InputError("empty factor path");
    }
    if (portfolio_path.empty()) throw InputError("no portfolio file given");
    if (!(from < to)) throw InputError("--from must be earlier than --to");
    if (!(outlier_threshold > 0.0)) throw InputError("outlier threshold must be positive");
    if (include_lstm) lstm.validate();
  }
};

struct CoefficientRow {
  std::string name;
  double coef = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  std::string stars;
  bool operator==(const CoefficientRow&) const = default;
};

struct CoefficientTable {
  std::string model;
  std::vector<CoefficientRow> rows;  // intercept ("alpha") first
  std::optional<double> r_squared;
  std::optional<double> adj_r_squared;
  double f_stat = 0.0;
  double f_p_value = 1.0;
  std::size_t observations = 0;
  std::size_t dof = 0;
  std::string equation;
  bool operator==(const CoefficientTable&) const = default;
};

struct MetricsRow {
  std::string model;
  std::optional<double> r_squared;
  double f_p_value = 1.0;
  double rmse = 0.0;
  double mae = 0.0;
  bool operator==(const MetricsRow&) const = default;
};

struct LstmSummary {
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::string test_from;
  std::string test_to;
  std::optional<double> r_squared;
  double rmse = 0.0;
  double mae = 0.0;
  double final_train_loss = 0.0;
  bool operator==(const LstmSummary&) const = default;
};

struct SectorReport {
  std::string name;
  std::size_t observations = 0;
  std::vector<CoefficientTable> coefficients;
  std::vector<MetricsRow> comparison;
  std::optional<LstmSummary> lstm;
  bool operator==(const SectorReport&) const = default;
};

struct InputDigest {
  std::string role;  // "factors" or "portfolios"
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
  std::size_t filled = 0;
  std::vector<std::string> outliers;  // "column@YYYYMM=value"
  bool operator==(const InputDigest&) const = default;
};

struct Provenance {
  std::string command;
  std::vector<InputDigest> inputs;
  std::string from;
  std::string to;
  std::string aligned_from;
  std::string aligned_to;
  std::size_t aligned_months = 0;
  std::vector<std::string> sectors;
  std::vector<std::string> models;
  double outlier_threshold = kDefaultOutlierThreshold;
  std::string lstm_config;  // key = value text, see lstm::write_train_config
  std::uint64_t seed = 0;
  bool operator==(const Provenance&) const = default;
};

struct Report {
  Provenance provenance;
  std::vector<SectorReport> sectors;
  bool operator==(const Report&) const = default;
};

namespace detail {

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InputError("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Stored p-values below the floor are zero; they print as "<1e-300".
inline double floor_p(double p) { return p < kPValueFloor ? 0.0 : p; }

template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string(name) + ": " + e.what());
  }
}

}  // namespace detail

inline CoefficientTable coefficient_table(const FactorRegression& reg) {
  CoefficientTable t;
  t.model = std::string(reg.spec.name());
  const auto& f = reg.fit;
  for (std::size_t j = 0; j < f.beta.size(); ++j) {
    t.rows.push_back({j == 0 ? "alpha" : f.regressors[j - 1], f.beta[j], f.std_errors[j], f.t_stats[j],
                      detail::floor_p(f.p_values[j]), std::string(to_string(reg.stars[j]))});
  }
  t.r_squared = f.r_squared;
  t.adj_r_squared = f.adj_r_squared;
  t.f_stat = f.f_stat;
  t.f_p_value = detail::floor_p(f.f_p_value);
  t.observations = f.observations;
  t.dof = f.dof;
  t.equation = reg.equation;
  return t;
}

/// Runs every stage the config asks for. Deterministic for fixed inputs and seed.
inline Report run_pipeline(const RunConfig& config) {
  detail::stage("config", [&] { config.validate(); });

  Report report;
  auto& prov = report.provenance;
  prov.command = config.command;
  prov.from = config.from.str();
  prov.to = config.to.str();
  prov.sectors = config.sectors;
  for (const auto& m : config.models) prov.models.emplace_back(m.name());
  prov.outlier_threshold = config.outlier_threshold;
  if (config.include_lstm) {
    prov.lstm_config = lstm::write_train_config(config.lstm);
    prov.seed = config.lstm.seed;
  }

  auto load = [&](const std::string& role, const std::string& path) {
    const auto bytes = detail::stage("ingest", [&] { return detail::read_file(path); });
    auto panel = detail::stage("ingest", [&] { return slice(parse_panel_csv(bytes), config.from, config.to); });
    auto [clean, rep] = detail::stage("clean", [&] {
      if (panel.size() == 0) throw InputError("'" + path + "' has no rows in the requested range");
      return clean_panel(panel, config.outlier_threshold);
    });
    InputDigest digest{role, path, detail::sha256_hex(bytes), bytes.size(), rep.filled.size(), {}};
    for (const auto& o : rep.outliers_removed) {
      digest.outliers.push_back(o.column + "@" + o.date.str() + "=" + detail::format_double(o.original));
    }
    prov.inputs.push_back(std::move(digest));
    return clean;
  };

  std::vector<MonthlyPanel> factor_panels;
  for (const auto& p : config.factor_paths) factor_panels.push_back(load("factors", p));
  const auto portfolios = load("portfolios", config.portfolio_path);

  std::vector<std::string> required = {"RF"};
  for (const auto& m : config.models) {
    for (const auto& f : m.factors()) required.push_back(f);
  }
  if (config.include_lstm) {
    for (const auto& f : lstm::default_features()) required.push_back(f);
  }
  required.insert(required.end(), config.sectors.begin(), config.sectors.end());

  const auto data = detail::stage("align", [&] {
    const auto factors = merge_factor_panels(factor_panels);
    return align_panels(factors, portfolios, config.from, config.to, required);
  });
  prov.aligned_from = data.dates().front().str();
  prov.aligned_to = data.dates().back().str();
  prov.aligned_months = data.size();

  for (const auto& sector : config.sectors) {
    SectorReport sr;
    sr.name = sector;
    sr.observations = data.size();
    for (const auto& spec : config.models) {
      const auto reg = detail::stage("fit", [&] { return fit_factor_model(data, spec, sector); });
      if (config.include_coefficients) sr.coefficients.push_back(coefficient_table(reg));
      if (config.include_comparison) {
        const auto row = detail::stage("compare", [&] { return comparison_row(data, reg); });
        sr.comparison.push_back({row.model, row.r_squared, detail::floor_p(row.f_p_value), row.rmse, row.mae});
      }
    }
    if (config.include_lstm) {
      sr.lstm = detail::stage("lstm", [&] {
        const auto windows = lstm::make_windows(data, sector, config.lstm.window);
        const auto result = lstm::train(windows, config.lstm);
        const auto n_train = result.history.train_samples;
        LstmSummary s;
        s.train_samples = n_train;
        s.test_samples = result.history.test_samples;
        s.test_from = windows.samples[n_train].target_date.str();
        s.test_to = windows.samples.back().target_date.str();
        s.r_squared = result.history.test.r_squared;
        s.rmse = result.history.test.rmse;
        s.mae = result.history.test.mae;
        s.final_train_loss = result.history.epoch_loss.empty() ? 0.0 : result.history.epoch_loss.back();
        if (config.model_dir) {
          const auto path = std::filesystem::path(*config.model_dir) / ("lstm_" + sector + ".txt");
          std::ofstream out(path, std::ios::binary);
          if (!out) throw InputError("cannot write model file '" + path.string() + "'");
          out << lstm::save_model(result.model);
        }
        return s;
      });
    }
    report.sectors.push_back(std::move(sr));
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

inline json p_json(double p) { return p < kPValueFloor ? json("<1e-300") : json(p); }

inline double p_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "<1e-300") throw InputError("bad p-value string in report");
    return 0.0;
  }
  return j.get<double>();
}

// Non-finite numbers are written as strings so the document stays valid JSON.
inline json num_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double num_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("bad number string in report: " + s);
  }
  return j.get<double>();
}

inline json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::json to_json(const Report& report) {
  using detail::json;
  const auto& p = report.provenance;
  json inputs = json::array();
  for (const auto& in : p.inputs) {
    inputs.push_back({{"role", in.role},
                      {"path", in.path},
                      {"sha256", in.sha256},
                      {"bytes", in.bytes},
                      {"filled_cells", in.filled},
                      {"outliers_removed", in.outliers}});
  }
  json prov = {{"command", p.command},
               {"inputs", inputs},
               {"requested_range", {{"from", p.from}, {"to", p.to}}},
               {"aligned_range", {{"from", p.aligned_from}, {"to", p.aligned_to}, {"months", p.aligned_months}}},
               {"sectors", p.sectors},
               {"models", p.models},
               {"outlier_threshold", p.outlier_threshold},
               {"lstm_config", p.lstm_config},
               {"seed", p.seed}};

  json sectors = json::array();
  for (const auto& s : report.sectors) {
    json coeffs = json::array();
    for (const auto& t : s.coefficients) {
      json rows = json::array();
      for (const auto& r : t.rows) {
        rows.push_back({{"name", r.name},
                        {"coefficient", r.coef},
                        {"std_error", detail::num_json(r.std_error)},
                        {"t_stat", detail::num_json(r.t_stat)},
                        {"p_value", detail::p_json(r.p_value)},
                        {"stars", r.stars}});
      }
      coeffs.push_back({{"model", t.model},
                        {"terms", rows},
                        {"r_squared", detail::opt_json(t.r_squared)},
                        {"adj_r_squared", detail::opt_json(t.adj_r_squared)},
                        {"f_stat", detail::num_json(t.f_stat)},
                        {"f_p_value", detail::p_json(t.f_p_value)},
                        {"observations", t.observations},
                        {"dof", t.dof},
                        {"equation", t.equation}});
    }
    json comparison = json::array();
    for (const auto& r : s.comparison) {
      comparison.push_back({{"model", r.model},
                            {"r_squared", detail::opt_json(r.r_squared)},
                            {"f_p_value", detail::p_json(r.f_p_value)},
                            {"rmse", r.rmse},
                            {"mae", r.mae}});
    }
    json lstm_json = nullptr;
    if (s.lstm) {
      const auto& l = *s.lstm;
      lstm_json = {{"split", "test"},
                   {"train_samples", l.train_samples},
                   {"test_samples", l.test_samples},
                   {"test_from", l.test_from},
                   {"test_to", l.test_to},
                   {"r_squared", detail::opt_json(l.r_squared)},
                   {"rmse", l.rmse},
                   {"mae", l.mae},
                   {"final_train_loss", l.final_train_loss}};
    }
    sectors.push_back({{"name", s.name},
                       {"observations", s.observations},
                       {"coefficients", coeffs},
                       {"comparison", comparison},
                       {"lstm", lstm_json}});
  }
  return {{"schema", kReportSchema}, {"provenance", prov}, {"sectors", sectors}};
}

inline Report report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) throw InputError("unsupported report schema");
    Report r;
    const auto& p = j.at("provenance");
    auto& prov = r.provenance;
    prov.command = p.at("command").get<std::string>();
    for (const auto& in : p.at("inputs")) {
      prov.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>(),
                             in.at("sha256").get<std::string>(), in.at("bytes").get<std::size_t>(),
                             in.at("filled_cells").get<std::size_t>(),
                             in.at("outliers_removed").get<std::vector<std::string>>()});
    }
    prov.from = p.at("requested_range").at("from").get<std::string>();
    prov.to = p.at("requested_range").at("to").get<std::string>();
    prov.aligned_from = p.at("aligned_range").at("from").get<std::string>();
    prov.aligned_to = p.at("aligned_range").at("to").get<std::string>();
    prov.aligned_months = p.at("aligned_range").at("months").get<std::size_t>();
    prov.sectors = p.at("sectors").get<std::vector<std::string>>();
    prov.models = p.at("models").get<std::vector<std::string>>();
    prov.outlier_threshold = p.at("outlier_threshold").get<double>();
    prov.lstm_config = p.at("lstm_config").get<std::string>();
    prov.seed = p.at("seed").get<std::uint64_t>();

    for (const auto& s : j.at("sectors")) {
      SectorReport sr;
      sr.name = s.at("name").get<std::string>();
      sr.observations = s.at("observations").get<std::size_t>();
      for (const auto& t : s.at("coefficients")) {
        CoefficientTable ct;
        ct.model = t.at("model").get<std::string>();
        for (const auto& row : t.at("terms")) {
          ct.rows.push_back({row.at("name").get<std::string>(), row.at("coefficient").get<double>(),
                             detail::num_from_json(row.at("std_error")), detail::num_from_json(row.at("t_stat")),
                             detail::p_from_json(row.at("p_value")), row.at("stars").get<std::string>()});
        }
        ct.r_squared = detail::opt_from_json(t.at("r_squared"));
        ct.adj_r_squared = detail::opt_from_json(t.at("adj_r_squared"));
        ct.f_stat = detail::num_from_json(t.at("f_stat"));
        ct.f_p_value = detail::p_from_json(t.at("f_p_value"));
        ct.observations = t.at("observations").get<std::size_t>();
        ct.dof = t.at("dof").get<std::size_t>();
        ct.equation = t.at("equation").get<std::string>();
        sr.coefficients.push_back(std::move(ct));
      }
      for (const auto& row : s.at("comparison")) {
        sr.comparison.push_back({row.at("model").get<std::string>(), detail::opt_from_json(row.at("r_squared")),
                                 detail::p_from_json(row.at("f_p_value")), row.at("rmse").get<double>(),
                                 row.at("mae").get<double>()});
      }
      if (const auto& l = s.at("lstm"); !l.is_null()) {
        sr.lstm = LstmSummary{l.at("train_samples").get<std::size_t>(), l.at("test_samples").get<std::size_t>(),
                              l.at("test_from").get<std::string>(),     l.at("test_to").get<std::string>(),
                              detail::opt_from_json(l.at("r_squared")), l.at("rmse").get<double>(),
                              l.at("mae").get<double>(),                l.at("final_train_loss").get<double>()};
      }
      r.sectors.push_back(std::move(sr));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Markdown

inline constexpr std::string_view kStarsFootnote =
    "Significance: *** p < 0.001, ** p < 0.01, * p < 0.05.";

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

inline std::string p_text(double p) { return p < kPValueFloor ? "<1e-300" : fmt("%.3g", p); }

inline std::string metric(const std::optional<double>& v) { return v ? fmt("%.3f", *v) : "n/a"; }

inline std::string stat(double v) { return std::isfinite(v) ? fmt("%.3f", v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

}  // namespace detail

inline std::string to_markdown(const Report& report) {
  std::ostringstream out;
  out << "# Factor model report\n";
  for (const auto& s : report.sectors) {
    out << "\n## " << s.name << "\n\n" << s.observations << " monthly observations.\n";
    for (const auto& t : s.coefficients) {
      out << "\n### " << t.model << " coefficients\n\n";
      out << "| Factor | Coefficient | Std. error | t | P-value |\n";
      out << "|---|---:|---:|---:|---|\n";
      for (const auto& r : t.rows) {
        out << "| " << r.name << " | " << detail::fmt("%.4f", r.coef) << " | " << detail::fmt("%.4f", r.std_error)
            << " | " << detail::stat(r.t_stat) << " | " << detail::p_text(r.p_value) << (r.stars.empty() ? "" : " ")
            << r.stars << " |\n";
      }
      out << "\n`" << t.equation << "`\n\nR-squared " << detail::metric(t.r_squared) << ", adjusted "
          << detail::metric(t.adj_r_squared) << ", F " << detail::stat(t.f_stat) << " on " << (t.rows.size() - 1)
          << " and " << t.dof << " DF, p " << detail::p_text(t.f_p_value) << ".\n";
    }
    if (!s.comparison.empty()) {
      out << "\n### Goodness of fit (in-sample)\n\n";
      out << "| " << s.name << " | R-squared | P-value | RMSE | MAE |\n";
      out << "|---|---:|---|---:|---:|\n";
      for (const auto& r : s.comparison) {
        out << "| " << r.model << " | " << detail::metric(r.r_squared) << " | " << detail::p_text(r.f_p_value)
            << to_string(significance(r.f_p_value)) << " | " << detail::fmt("%.3f", r.rmse) << " | "
            << detail::fmt("%.3f", r.mae) << " |\n";
      }
    }
    if (s.lstm) {
      const auto& l = *s.lstm;
      out << "\n### LSTM (test split " << l.test_from << "-" << l.test_to << ", " << l.train_samples << " train / "
          << l.test_samples << " test windows)\n\n";
      out << "| | R-squared | RMSE | MAE |\n|---|---:|---:|---:|\n";
      out << "| " << s.name << " | " << detail::metric(l.r_squared) << " | " << detail::fmt("%.3f", l.rmse) << " | "
          << detail::fmt("%.3f", l.mae) << " |\n";
    }
  }
  out << "\n" << kStarsFootnote << "\n";

  const auto& p = report.provenance;
  out << "\n## Provenance\n\n";
  out << "- command: `" << p.command << "`\n";
  out << "- requested range: " << p.from << "-" << p.to << "; aligned: " << p.aligned_from << "-" << p.aligned_to
      << " (" << p.aligned_months << " months)\n";
  out << "- outlier threshold: " << detail::format_double(p.outlier_threshold) << " robust sigma\n";
  for (const auto& in : p.inputs) {
    out << "- " << in.role << ": `" << in.path << "` sha256 " << in.sha256 << ", " << in.bytes << " bytes, "
        << in.filled << " cells filled, " << in.outliers.size() << " outliers removed\n";
  }
  if (!p.lstm_config.empty()) {
    out << "- LSTM config:\n\n```\n" << p.lstm_config << "```\n";
  }
  return out.str();
}

inline std::string emit_report(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return to_json(report).dump(2) + "\n";
    case ReportFormat::Markdown: return to_markdown(report);
  }
  throw InputError("unknown report format");
}

inline std::string emit_report(const Report& report, std::string_view format) {
  return emit_report(report, parse_format(format));
}

}  // namespace factorlab
