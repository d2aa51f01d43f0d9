#pragma once

// Synthetic data for tests. Everything is seeded and uses hand-rolled uniform/normal
// draws so fixtures are identical on every standard library.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "factorlab/factorlab.hpp"

namespace testing_support {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  double normal() {
    if (spare_) {
      spare_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * std::numbers::pi * u2);
    spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  bool spare_ = false;
  double cached_ = 0.0;
};

inline std::vector<factorlab::YearMonth> month_range(int from, int to) {
  std::vector<factorlab::YearMonth> out;
  for (auto d = factorlab::YearMonth::from_int(from); d.yyyymm() <= to; d = d.next()) out.push_back(d);
  return out;
}

/// Monthly factor and sector series whose sector excess returns follow known linear
/// factor loadings plus noise. Units are percent per month.
struct SyntheticMarket {
  std::vector<factorlab::YearMonth> dates;
  std::vector<double> mkt, smb, smb5, hml, mom, rmw, cma, rf;
  std::vector<double> manuf, hitec, other, cnsmr, hlth;
};

inline SyntheticMarket make_market(std::uint64_t seed, int from = 200001, int to = 202412) {
  Rng rng(seed);
  SyntheticMarket m;
  m.dates = month_range(from, to);
  for (std::size_t t = 0; t < m.dates.size(); ++t) {
    const double mkt = rng.normal(0.7, 4.5);
    const double smb = rng.normal(0.1, 2.5);
    const double hml = rng.normal(0.0, 3.0);
    const double mom = rng.normal(0.5, 4.0) - 0.2 * hml;
    const double rmw = rng.normal(0.3, 2.0);
    const double cma = rng.normal(0.1, 1.8) + 0.3 * hml;
    const double smb5 = smb + rng.normal(0.0, 0.3);
    const double rf = 0.12 + 0.1 * std::sin(static_cast<double>(t) / 30.0);
    m.mkt.push_back(mkt);
    m.smb.push_back(smb);
    m.smb5.push_back(smb5);
    m.hml.push_back(hml);
    m.mom.push_back(mom);
    m.rmw.push_back(rmw);
    m.cma.push_back(cma);
    m.rf.push_back(rf);
    m.manuf.push_back(rf + 0.95 * mkt + 0.08 * smb5 + 0.02 * hml + 0.1 * rmw + 0.01 * cma + rng.normal(0.0, 1.45));
    m.hitec.push_back(rf + 0.9 * mkt + 0.02 * smb5 - 0.19 * hml - 0.08 * rmw - 0.06 * cma + rng.normal(0.0, 1.8));
    m.other.push_back(rf + 0.83 * mkt - 0.03 * smb5 + 0.2977 * hml - 0.1 * rmw - 0.07 * cma + rng.normal(0.0, 1.18));
    m.cnsmr.push_back(rf + 0.8 * mkt + rng.normal(0.0, 2.0));
    m.hlth.push_back(rf + 0.7 * mkt + rng.normal(0.0, 2.5));
  }
  return m;
}

namespace detail {

inline std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%8.2f", v);
  return buf;
}

inline std::string table(const std::vector<factorlab::YearMonth>& dates, const std::vector<std::string>& names,
                         const std::vector<const std::vector<double>*>& cols) {
  std::string out;
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (std::size_t t = 0; t < dates.size(); ++t) {
    out += dates[t].str();
    for (const auto* c : cols) out += "," + cell((*c)[t]);
    out += "\n";
  }
  return out;
}

// A few annual rows, the way the library appends them after the monthly table.
inline std::string annual_section(const std::string& title, std::size_t ncols) {
  std::string out = "\n " + title + "\n";
  for (std::size_t c = 0; c < ncols; ++c) out += ",X" + std::to_string(c);
  out += "\n";
  for (int y = 2000; y < 2003; ++y) {
    out += "  " + std::to_string(y);
    for (std::size_t c = 0; c < ncols; ++c) out += ",    1.00";
    out += "\n";
  }
  return out;
}

}  // namespace detail

/// Text in the layout of F-F_Research_Data_5_Factors_2x3.CSV.
inline std::string five_factor_csv(const SyntheticMarket& m) {
  std::string out =
      "This file was created by a synthetic generator for tests.\n"
      "The 1-month TBill rate data are synthetic too.\n\n";
  out += detail::table(m.dates, {"Mkt-RF", "SMB", "HML", "RMW", "CMA", "RF"},
                       {&m.mkt, &m.smb5, &m.hml, &m.rmw, &m.cma, &m.rf});
  out += detail::annual_section("Annual Factors: January-December ", 6);
  return out;
}

/// Text in the layout of F-F_Research_Data_Factors.CSV.
inline std::string three_factor_csv(const SyntheticMarket& m) {
  std::string out = "Synthetic three-factor file\n\n";
  out += detail::table(m.dates, {"Mkt-RF", "SMB", "HML", "RF"}, {&m.mkt, &m.smb, &m.hml, &m.rf});
  out += detail::annual_section("Annual Factors: January-December ", 4);
  return out;
}

/// Text in the layout of F-F_Momentum_Factor.CSV (header padded the way the library does).
inline std::string momentum_csv(const SyntheticMarket& m) {
  std::string out = "Synthetic momentum file\n\nMissing data are indicated by -99.99.\n\n";
  out += detail::table(m.dates, {"Mom   "}, {&m.mom});
  out += detail::annual_section("Annual Factors:", 1);
  return out;
}

/// Text in the layout of 5_Industry_Portfolios.CSV: value-weighted section first, then
/// an equal-weighted section the parser must not read.
inline std::string industry_csv(const SyntheticMarket& m) {
  std::string out = "  This file was created using synthetic data.\n  Monthly Returns\n\n";
  out += "  Average Value Weighted Returns -- Monthly\n";
  out += detail::table(m.dates, {"Cnsmr", "Manuf", "HiTec", "Hlth ", "Other"},
                       {&m.cnsmr, &m.manuf, &m.hitec, &m.hlth, &m.other});
  out += "\n  Average Equal Weighted Returns -- Monthly\n";
  std::vector<double> shifted(m.manuf.size(), 42.0);
  out += detail::table(m.dates, {"Cnsmr", "Manuf", "HiTec", "Hlth ", "Other"},
                       {&shifted, &shifted, &shifted, &shifted, &shifted});
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// Aligned dataset straight from a synthetic market (no file round trip).
inline factorlab::AlignedDataset aligned(const SyntheticMarket& m) {
  return factorlab::AlignedDataset(m.dates, {{"Mkt-RF", m.mkt},
                                             {"SMB", m.smb},
                                             {"SMB5", m.smb5},
                                             {"HML", m.hml},
                                             {"MOM", m.mom},
                                             {"RMW", m.rmw},
                                             {"CMA", m.cma},
                                             {"RF", m.rf},
                                             {"Manuf", m.manuf},
                                             {"Hitec", m.hitec},
                                             {"Other", m.other}});
}

/// Target y_t = 0.9 mkt_t + 0.5 tanh(3 * mean(SMB_{t-5..t})) + small noise, with the
/// remaining factors as unrelated noise. Returned as sector "Synth" (RF = 0).
inline factorlab::AlignedDataset nonlinear_fixture(std::uint64_t seed, std::size_t months = 241,
                                                   double mkt_sd = 0.7, double noise_sd = 0.05) {
  Rng rng(seed);
  const std::size_t warmup = 5;
  const std::size_t n = months + warmup;
  std::vector<double> mkt(n), smb(n), hml(n), rmw(n), cma(n), rf(n, 0.0), y(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    mkt[t] = rng.normal(0.0, mkt_sd);
    smb[t] = rng.normal();
    hml[t] = rng.normal();
    rmw[t] = rng.normal();
    cma[t] = rng.normal();
  }
  for (std::size_t t = warmup; t < n; ++t) {
    double mean6 = 0.0;
    for (std::size_t k = t - 5; k <= t; ++k) mean6 += smb[k];
    mean6 /= 6.0;
    y[t] = 0.9 * mkt[t] + 0.5 * std::tanh(3.0 * mean6) + rng.normal(0.0, noise_sd);
  }
  auto tail = [&](const std::vector<double>& v) { return std::vector<double>(v.begin() + warmup, v.end()); };
  std::vector<factorlab::YearMonth> dates;
  auto ym = factorlab::YearMonth::from_int(200401);
  for (std::size_t i = 0; i < months; ++i, ym = ym.next()) dates.push_back(ym);
  return factorlab::AlignedDataset(dates, {{"Mkt-RF", tail(mkt)},
                                           {"SMB", tail(smb)},
                                           {"HML", tail(hml)},
                                           {"RMW", tail(rmw)},
                                           {"CMA", tail(cma)},
                                           {"RF", tail(rf)},
                                           {"Synth", tail(y)}});
}

struct OlsInstance {
  std::vector<std::vector<double>> regressors;
  std::vector<double> y;

  factorlab::DesignMatrix design() const {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < regressors.size(); ++j) names.push_back("x" + std::to_string(j));
    return factorlab::DesignMatrix(names, regressors, y);
  }
};

/// n in [20, 200], m in [1, 6], coefficients bounded away from zero so relative
/// comparisons are meaningful.
inline OlsInstance random_ols_instance(Rng& rng) {
  const int n = rng.integer(20, 200);
  const int m = rng.integer(1, 6);
  OlsInstance inst;
  std::vector<double> beta(static_cast<std::size_t>(m) + 1);
  for (auto& b : beta) b = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
  inst.regressors.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    double y = beta[0];
    for (int j = 0; j < m; ++j) {
      const double x = rng.normal(rng.uniform(-1.0, 1.0), 2.0);
      inst.regressors[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = x;
      y += beta[static_cast<std::size_t>(j) + 1] * x;
    }
    inst.y.push_back(y + rng.normal(0.0, 0.5));
  }
  return inst;
}

/// Test-split R^2 of least squares on the newest window row (contemporaneous factors
/// plus lagged return), trained on the same chronological split the LSTM uses.
inline double ols_split_r2(const factorlab::lstm::WindowedDataset& windows) {
  using namespace factorlab;
  auto [train, test] = lstm::split_7_3(windows);
  const std::size_t d = windows.features.size();
  auto design = [&](const lstm::WindowedDataset& ds) {
    std::vector<Vector> cols(d);
    Vector y;
    for (const auto& s : ds.samples) {
      const auto last = s.window.row(s.window.rows() - 1);
      for (std::size_t c = 0; c < d; ++c) cols[c].push_back(last[c]);
      y.push_back(s.target);
    }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < d; ++c) names.push_back("x" + std::to_string(c));
    return DesignMatrix(names, cols, y);
  };
  const auto fit = ols_fit(design(train));
  const auto test_design = design(test);
  return prediction_metrics(test_design.y(), predict(fit, test_design)).r_squared.value();
}

}  // namespace testing_support
