#pragma once

// Single-layer LSTM sequence regressor trained by full-batch backpropagation
// through time. One window of monthly feature rows in, one excess return out.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factorlab/data_ingest.hpp"
#include "factorlab/error.hpp"
#include "factorlab/factor_models.hpp"
#include "factorlab/matrix.hpp"
#include "factorlab/regression.hpp"

namespace factorlab::lstm {

enum Gate : std::size_t { kForget = 0, kInput = 1, kOutput = 2, kCandidate = 3 };
inline constexpr std::array<std::string_view, 4> kGateNames = {"forget", "input", "output", "candidate"};

struct GateWeights {
  Matrix w;  // hidden x input
  Matrix u;  // hidden x hidden
  Vector b;  // hidden

  bool operator==(const GateWeights&) const = default;
};

struct LstmParams {
  std::size_t input = 0;
  std::size_t hidden = 0;
  std::array<GateWeights, 4> gates;
  Vector w_out;
  double b_out = 0.0;

  LstmParams() = default;
  LstmParams(std::size_t input_size, std::size_t hidden_size) : input(input_size), hidden(hidden_size) {
    for (auto& g : gates) g = {Matrix(hidden, input), Matrix(hidden, hidden), Vector(hidden, 0.0)};
    w_out.assign(hidden, 0.0);
  }

  /// Visits every tensor in a fixed order: per gate W, U, b, then w_out, b_out.
  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string gate(kGateNames[k]);
      fn("W_" + gate, gates[k].w.data());
      fn("U_" + gate, gates[k].u.data());
      fn("b_" + gate, std::span<double>(gates[k].b));
    }
    fn(std::string("w_out"), std::span<double>(w_out));
    fn(std::string("b_out"), std::span<double>(&b_out, 1));
  }

  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    const_cast<LstmParams*>(this)->for_each_tensor(
        [&](const std::string& name, std::span<double> t) { fn(name, std::span<const double>(t)); });
  }

  std::size_t size() const {
    std::size_t n = 0;
    for_each_tensor([&](const std::string&, std::span<const double> t) { n += t.size(); });
    return n;
  }

  Vector flatten() const {
    Vector out;
    out.reserve(size());
    for_each_tensor([&](const std::string&, std::span<const double> t) { out.insert(out.end(), t.begin(), t.end()); });
    return out;
  }

  void assign(std::span<const double> flat) {
    if (flat.size() != size()) throw InputError("flat parameter vector has the wrong length");
    std::size_t pos = 0;
    for_each_tensor([&](const std::string&, std::span<double> t) {
      std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), t.size(), t.begin());
      pos += t.size();
    });
  }

  bool operator==(const LstmParams&) const = default;
};

struct LstmState {
  Vector h;
  Vector c;

  static LstmState zeros(std::size_t hidden) { return {Vector(hidden, 0.0), Vector(hidden, 0.0)}; }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Everything one step produces; kept for the backward pass.
struct StepCache {
  Vector x, h_prev, c_prev;
  Vector f, i, o, g;
  Vector c, tanh_c, h;
};

namespace detail {

inline StepCache step(std::span<const double> x, const LstmState& state, const LstmParams& p) {
  if (x.size() != p.input) {
    throw InputError("input has " + std::to_string(x.size()) + " features, cell expects " + std::to_string(p.input));
  }
  if (state.h.size() != p.hidden || state.c.size() != p.hidden) throw InputError("state size does not match cell");

  StepCache s;
  s.x.assign(x.begin(), x.end());
  s.h_prev = state.h;
  s.c_prev = state.c;
  std::array<Vector, 4> z;
  for (std::size_t k = 0; k < 4; ++k) {
    z[k] = p.gates[k].b;
    gemv_accumulate(p.gates[k].w, x, z[k]);
    gemv_accumulate(p.gates[k].u, state.h, z[k]);
  }
  const std::size_t h = p.hidden;
  s.f.resize(h), s.i.resize(h), s.o.resize(h), s.g.resize(h);
  s.c.resize(h), s.tanh_c.resize(h), s.h.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    s.f[j] = sigmoid(z[kForget][j]);
    s.i[j] = sigmoid(z[kInput][j]);
    s.o[j] = sigmoid(z[kOutput][j]);
    s.g[j] = std::tanh(z[kCandidate][j]);
    s.c[j] = s.f[j] * state.c[j] + s.i[j] * s.g[j];
    s.tanh_c[j] = std::tanh(s.c[j]);
    s.h[j] = s.o[j] * s.tanh_c[j];
  }
  return s;
}

}  // namespace detail

/// f, i, o = sigmoid(W x + U h + b); g = tanh(...); c' = f*c + i*g; h' = o*tanh(c').
inline LstmState cell_forward(std::span<const double> x, const LstmState& state, const LstmParams& params) {
  auto s = detail::step(x, state, params);
  return {std::move(s.h), std::move(s.c)};
}

struct SequenceForward {
  double prediction = 0.0;
  std::vector<StepCache> steps;
};

/// Runs the window (rows oldest to newest) from a zero state and projects h_L.
inline SequenceForward forward_sequence(const Matrix& window, const LstmParams& params) {
  if (window.rows() == 0) throw InputError("empty input window");
  SequenceForward out;
  out.steps.reserve(window.rows());
  LstmState state = LstmState::zeros(params.hidden);
  for (std::size_t t = 0; t < window.rows(); ++t) {
    out.steps.push_back(detail::step(window.row(t), state, params));
    state = {out.steps.back().h, out.steps.back().c};
  }
  out.prediction = dot(params.w_out, state.h) + params.b_out;
  return out;
}

struct Sample {
  Matrix window;  // L x d
  double target = 0.0;
  YearMonth target_date;
};

struct Gradients {
  LstmParams grad;
  double loss = 0.0;       // batch-mean squared error
  double grad_norm = 0.0;  // global norm before clipping
};

inline constexpr double kDefaultClipNorm = 5.0;

/// Exact gradients of the batch-mean squared error. The accumulated gradient is
/// rescaled to global norm `clip_norm` when it exceeds it; clip_norm <= 0 disables.
inline Gradients bptt_gradients(std::span<const Sample> batch, const LstmParams& params,
                                double clip_norm = kDefaultClipNorm) {
  if (batch.empty()) throw InputError("empty batch");
  const std::size_t h = params.hidden;
  Gradients out{LstmParams(params.input, params.hidden), 0.0, 0.0};
  auto& grad = out.grad;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  Vector dh(h), dc_next(h), dh_prev(h);
  std::array<Vector, 4> dz;
  for (auto& v : dz) v.assign(h, 0.0);

  for (const auto& sample : batch) {
    const auto fwd = forward_sequence(sample.window, params);
    const double err = fwd.prediction - sample.target;
    out.loss += err * err * inv_n;
    const double dpred = 2.0 * err * inv_n;

    const auto& last = fwd.steps.back();
    for (std::size_t j = 0; j < h; ++j) {
      grad.w_out[j] += dpred * last.h[j];
      dh[j] = dpred * params.w_out[j];
    }
    grad.b_out += dpred;
    std::fill(dc_next.begin(), dc_next.end(), 0.0);

    for (std::size_t t = fwd.steps.size(); t-- > 0;) {
      const auto& s = fwd.steps[t];
      for (std::size_t j = 0; j < h; ++j) {
        const double dc = dc_next[j] + dh[j] * s.o[j] * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
        dz[kOutput][j] = dh[j] * s.tanh_c[j] * s.o[j] * (1.0 - s.o[j]);
        dz[kForget][j] = dc * s.c_prev[j] * s.f[j] * (1.0 - s.f[j]);
        dz[kInput][j] = dc * s.g[j] * s.i[j] * (1.0 - s.i[j]);
        dz[kCandidate][j] = dc * s.i[j] * (1.0 - s.g[j] * s.g[j]);
        dc_next[j] = dc * s.f[j];
      }
      std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
      for (std::size_t k = 0; k < 4; ++k) {
        outer_accumulate(grad.gates[k].w, dz[k], s.x);
        outer_accumulate(grad.gates[k].u, dz[k], s.h_prev);
        for (std::size_t j = 0; j < h; ++j) grad.gates[k].b[j] += dz[k][j];
        gemv_transpose_accumulate(params.gates[k].u, dz[k], dh_prev);
      }
      std::swap(dh, dh_prev);
    }
  }
  if (!std::isfinite(out.loss)) throw NumericError("non-finite training loss");

  double norm2 = 0.0;
  grad.for_each_tensor([&](const std::string&, std::span<const double> t) {
    for (double v : t) norm2 += v * v;
  });
  out.grad_norm = std::sqrt(norm2);
  if (clip_norm > 0.0 && out.grad_norm > clip_norm) {
    const double scale = clip_norm / out.grad_norm;
    grad.for_each_tensor([&](const std::string&, std::span<double> t) {
      for (double& v : t) v *= scale;
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Windowed samples

inline const std::vector<std::string>& default_features() {
  static const std::vector<std::string> f = {"Mkt-RF", "SMB", "HML", "RMW", "CMA"};
  return f;
}

struct WindowedDataset {
  std::vector<std::string> features;  // factor columns, then the lagged excess return
  std::size_t window = 0;
  std::vector<Sample> samples;
};

/// Sample for month t: rows for months t-L+1..t, each holding that month's factor
/// values and the sector's excess return one month earlier; target is the excess
/// return of month t. The lagged return column never reaches month t itself.
/// Windows spanning a calendar gap are skipped.
inline WindowedDataset make_windows(const AlignedDataset& data, std::string_view sector, std::size_t window,
                                    const std::vector<std::string>& factors = default_features()) {
  if (window == 0) throw InputError("window length must be positive");
  const ModelSpec ff5{ModelKind::FF5};
  std::vector<const Vector*> cols;
  for (const auto& f : factors) cols.push_back(&factor_column(data, ff5, f));
  const Vector excess = excess_return(data, sector);

  WindowedDataset ds;
  ds.features = factors;
  ds.features.push_back("lagged excess return");
  ds.window = window;
  const std::size_t d = ds.features.size();
  for (std::size_t t = window; t < data.size(); ++t) {
    if (!data.contiguous(t - window, t)) continue;
    Sample s{Matrix(window, d), excess[t], data.dates()[t]};
    for (std::size_t r = 0; r < window; ++r) {
      const std::size_t month = t - window + 1 + r;
      for (std::size_t c = 0; c < factors.size(); ++c) s.window(r, c) = (*cols[c])[month];
      s.window(r, d - 1) = excess[month - 1];
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

/// First floor(0.7 N) samples train, the rest test. Order is never shuffled.
inline std::pair<WindowedDataset, WindowedDataset> split_7_3(const WindowedDataset& data) {
  const std::size_t n = data.samples.size();
  if (n < 10) throw InputError("need at least 10 windowed samples to split, have " + std::to_string(n));
  const std::size_t n_train = n * 7 / 10;
  WindowedDataset train{data.features, data.window, {}};
  WindowedDataset test{data.features, data.window, {}};
  train.samples.assign(data.samples.begin(), data.samples.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.samples.assign(data.samples.begin() + static_cast<std::ptrdiff_t>(n_train), data.samples.end());
  return {std::move(train), std::move(test)};
}

/// Per-feature z-scoring with statistics from distinct months of the training windows.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer fit(const WindowedDataset& train) {
    if (train.samples.empty()) throw InputError("cannot standardize an empty training set");
    const std::size_t d = train.features.size();
    Standardizer s{Vector(d, 0.0), Vector(d, 1.0)};
    std::set<int> seen;
    std::vector<const double*> rows;
    for (const auto& sample : train.samples) {
      const std::size_t L = sample.window.rows();
      for (std::size_t r = 0; r < L; ++r) {
        const int month = sample.target_date.ordinal() - static_cast<int>(L - 1 - r);
        if (seen.insert(month).second) rows.push_back(sample.window.row(r).data());
      }
    }
    const double n = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < d; ++c) {
      double m = 0.0;
      for (const double* row : rows) m += row[c];
      m /= n;
      double ss = 0.0;
      for (const double* row : rows) ss += (row[c] - m) * (row[c] - m);
      const double sd = std::sqrt(ss / n);
      s.mean[c] = m;
      s.scale[c] = sd > 0.0 ? sd : 1.0;
    }
    return s;
  }

  static Standardizer identity(std::size_t d) { return {Vector(d, 0.0), Vector(d, 1.0)}; }

  Matrix apply(const Matrix& window) const {
    if (window.cols() != mean.size()) throw InputError("window width does not match the standardizer");
    Matrix out = window;
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = (out(r, c) - mean[c]) / scale[c];
    }
    return out;
  }

  WindowedDataset apply(const WindowedDataset& data) const {
    WindowedDataset out{data.features, data.window, data.samples};
    for (auto& s : out.samples) s.window = apply(s.window);
    return out;
  }

  bool operator==(const Standardizer&) const = default;
};

/// Fitted network plus the input scaling it was trained with.
struct LstmModel {
  LstmParams params;
  Standardizer scaler;
  std::vector<std::string> features;
  std::size_t window = 0;

  double predict(const Matrix& raw_window) const {
    return forward_sequence(scaler.apply(raw_window), params).prediction;
  }

  bool operator==(const LstmModel&) const = default;
};

enum class Optimizer { GradientDescent, Adam };

struct TrainConfig {
  std::size_t window = 12;
  std::size_t hidden = 16;
  double learning_rate = 1e-2;
  std::size_t epochs = 300;
  std::uint64_t seed = 42;
  Optimizer optimizer = Optimizer::Adam;
  double clip_norm = kDefaultClipNorm;
  double forget_bias = 1.0;

  void validate() const {
    if (window == 0) throw InputError("window must be positive");
    if (hidden == 0) throw InputError("hidden size must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InputError("learning rate must be positive");
    if (!(clip_norm >= 0.0)) throw InputError("clip norm must be non-negative");
    if (!std::isfinite(forget_bias)) throw InputError("forget bias must be finite");
  }

  bool operator==(const TrainConfig&) const = default;
};

struct TrainHistory {
  std::vector<double> epoch_loss;  // training MSE measured at the start of each epoch's step
  PredictionMetrics test;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
};

struct TrainResult {
  LstmModel model;
  TrainHistory history;
};

namespace detail {

// Uniform in [lo, hi) from the top 53 bits of a 64-bit Mersenne Twister, so draws are
// identical across standard library implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Uniform(-1/sqrt(h), 1/sqrt(h)) for every weight and bias, then the forget-gate
/// bias shifted by `forget_bias`.
inline LstmParams init_params(std::size_t input, std::size_t hidden, std::uint64_t seed, double forget_bias = 1.0) {
  LstmParams p(input, hidden);
  detail::UniformSource draw(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  p.for_each_tensor([&](const std::string&, std::span<double> t) {
    for (double& v : t) v = draw(-bound, bound);
  });
  for (double& b : p.gates[kForget].b) b += forget_bias;
  return p;
}

inline PredictionMetrics evaluate(const LstmModel& model, const WindowedDataset& test) {
  if (test.samples.empty()) throw InputError("empty evaluation set");
  Vector y, yhat;
  for (const auto& s : test.samples) {
    y.push_back(s.target);
    yhat.push_back(model.predict(s.window));
  }
  return prediction_metrics(y, yhat);
}

/// Chronological 7:3 split, train-split standardization, full-batch updates, test metrics.
inline TrainResult train(const WindowedDataset& data, const TrainConfig& config) {
  config.validate();
  if (data.window != config.window) {
    throw InputError("dataset window " + std::to_string(data.window) + " differs from configured " +
                     std::to_string(config.window));
  }
  auto [train_raw, test_raw] = split_7_3(data);
  const auto scaler = Standardizer::fit(train_raw);
  const auto train_set = scaler.apply(train_raw);

  TrainResult result;
  auto& model = result.model;
  model.scaler = scaler;
  model.features = data.features;
  model.window = data.window;
  model.params = init_params(data.features.size(), config.hidden, config.seed, config.forget_bias);

  auto& hist = result.history;
  hist.train_samples = train_raw.samples.size();
  hist.test_samples = test_raw.samples.size();

  Vector theta = model.params.flatten();
  Vector m1(theta.size(), 0.0), m2(theta.size(), 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Gradients g;
    try {
      g = bptt_gradients(train_set.samples, model.params, config.clip_norm);
    } catch (const NumericError& e) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    hist.epoch_loss.push_back(g.loss);
    const Vector grad = g.grad.flatten();
    if (config.optimizer == Optimizer::GradientDescent) {
      for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= config.learning_rate * grad[k];
    } else {
      beta1_t *= kBeta1;
      beta2_t *= kBeta2;
      for (std::size_t k = 0; k < theta.size(); ++k) {
        m1[k] = kBeta1 * m1[k] + (1.0 - kBeta1) * grad[k];
        m2[k] = kBeta2 * m2[k] + (1.0 - kBeta2) * grad[k] * grad[k];
        const double mhat = m1[k] / (1.0 - beta1_t);
        const double vhat = m2[k] / (1.0 - beta2_t);
        theta[k] -= config.learning_rate * mhat / (std::sqrt(vhat) + kEps);
      }
    }
    model.params.assign(theta);
  }
  hist.test = evaluate(model, test_raw);
  return result;
}

// ---------------------------------------------------------------------------
// Persistence

inline std::string_view to_string(Optimizer o) { return o == Optimizer::Adam ? "adam" : "sgd"; }

inline Optimizer parse_optimizer(std::string_view s) {
  const auto key = column_key(s);
  if (key == "ADAM") return Optimizer::Adam;
  if (key == "SGD" || key == "GD" || key == "GRADIENTDESCENT") return Optimizer::GradientDescent;
  throw InputError("unknown optimizer '" + std::string(s) + "'");
}

/// `key = value` lines; `#` starts a comment. Unknown keys are rejected.
inline TrainConfig read_train_config(std::istream& in) {
  TrainConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  auto as_size = [&](std::string_view v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      throw InputError("config line " + std::to_string(lineno) + ": expected a non-negative integer");
    }
    return out;
  };
  auto as_double = [&](std::string_view v) {
    const auto d = factorlab::detail::parse_double(v);
    if (!d) throw InputError("config line " + std::to_string(lineno) + ": expected a number");
    return *d;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = factorlab::detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw InputError("config line " + std::to_string(lineno) + ": missing '='");
    const auto key = factorlab::detail::trim(body.substr(0, eq));
    const auto value = factorlab::detail::trim(body.substr(eq + 1));
    if (key == "window") cfg.window = as_size(value);
    else if (key == "hidden") cfg.hidden = as_size(value);
    else if (key == "learning_rate") cfg.learning_rate = as_double(value);
    else if (key == "epochs") cfg.epochs = as_size(value);
    else if (key == "seed") cfg.seed = as_size(value);
    else if (key == "optimizer") cfg.optimizer = parse_optimizer(value);
    else if (key == "clip_norm") cfg.clip_norm = as_double(value);
    else if (key == "forget_bias") cfg.forget_bias = as_double(value);
    else throw InputError("config line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
  }
  cfg.validate();
  return cfg;
}

inline std::string write_train_config(const TrainConfig& cfg) {
  using factorlab::detail::format_double;
  std::ostringstream out;
  out << "window = " << cfg.window << "\n"
      << "hidden = " << cfg.hidden << "\n"
      << "learning_rate = " << format_double(cfg.learning_rate) << "\n"
      << "epochs = " << cfg.epochs << "\n"
      << "seed = " << cfg.seed << "\n"
      << "optimizer = " << to_string(cfg.optimizer) << "\n"
      << "clip_norm = " << format_double(cfg.clip_norm) << "\n"
      << "forget_bias = " << format_double(cfg.forget_bias) << "\n";
  return out.str();
}

inline constexpr std::string_view kModelFormatTag = "factorlab-lstm-v1";

// Text layout:
//   factorlab-lstm-v1
//   input <d> hidden <h> window <L>
//   feature <name>            (d lines)
//   <tensor> <count> v1 v2 ...  (W_forget ... b_out, then scale_mean, scale_sd)
inline std::string save_model(const LstmModel& model) {
  using factorlab::detail::format_double;
  std::ostringstream out;
  out << kModelFormatTag << "\n";
  out << "input " << model.params.input << " hidden " << model.params.hidden << " window " << model.window << "\n";
  for (const auto& f : model.features) out << "feature " << f << "\n";
  auto tensor = [&](const std::string& name, std::span<const double> t) {
    out << name << " " << t.size();
    for (double v : t) out << " " << format_double(v);
    out << "\n";
  };
  model.params.for_each_tensor(tensor);
  tensor("scale_mean", model.scaler.mean);
  tensor("scale_sd", model.scaler.scale);
  return out.str();
}

inline LstmModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || factorlab::detail::trim(line) != kModelFormatTag) {
    throw InputError("not a " + std::string(kModelFormatTag) + " model file");
  }
  LstmModel model;
  std::size_t input = 0, hidden = 0;
  {
    std::getline(in, line);
    std::istringstream dims(line);
    std::string a, b, c;
    if (!(dims >> a >> input >> b >> hidden >> c >> model.window) || a != "input" || b != "hidden" || c != "window") {
      throw InputError("model file: malformed dimension line");
    }
  }
  if (input == 0 || hidden == 0) throw InputError("model file: zero dimension");
  model.params = LstmParams(input, hidden);
  for (std::size_t k = 0; k < input; ++k) {
    if (!std::getline(in, line) || line.rfind("feature ", 0) != 0) throw InputError("model file: missing feature line");
    model.features.push_back(line.substr(8));
  }
  auto read_tensor = [&](const std::string& name, std::span<double> t) {
    std::string got;
    std::size_t count = 0;
    if (!(in >> got >> count) || got != name || count != t.size()) {
      throw InputError("model file: expected tensor '" + name + "' of size " + std::to_string(t.size()));
    }
    for (double& v : t) {
      std::string tok;
      in >> tok;
      const auto d = factorlab::detail::parse_double(tok);
      if (!d) throw InputError("model file: bad value in '" + name + "'");
      v = *d;
    }
  };
  model.params.for_each_tensor(read_tensor);
  model.scaler = Standardizer::identity(input);
  read_tensor("scale_mean", model.scaler.mean);
  read_tensor("scale_sd", model.scaler.scale);
  return model;
}

}  // namespace factorlab::lstm
