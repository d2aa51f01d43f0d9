// factorlab: factor-model regressions and an LSTM forecaster on monthly sector returns.
//
//   factorlab compare --factors F-F_Research_Data_5_Factors_2x3.csv --factors F-F_Momentum_Factor.csv
//       --portfolios 5_Industry_Portfolios.csv --from 200401 --to 202401
//       --sectors Manuf,Hitec,Other --models ff3,carhart4,ff5 --format json --out report.json
//
// Exit codes: 0 success, 1 input error, 2 numeric failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "factorlab/factorlab.hpp"

namespace {

struct Options {
  std::vector<std::string> factors;
  std::string portfolios;
  int from = 200401;
  int to = 202401;
  std::vector<std::string> sectors = {"Manuf", "Hitec", "Other"};
  std::vector<std::string> models = {"ff3", "carhart4", "ff5"};
  double threshold = factorlab::kDefaultOutlierThreshold;
  std::string format = "json";
  std::string out;

  std::string lstm_config;
  std::size_t window = 12;
  std::size_t hidden = 16;
  std::size_t epochs = 300;
  std::uint64_t seed = 42;
  double learning_rate = 1e-2;
  std::string optimizer = "adam";
  std::string model_dir;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--factors", o.factors, "Factor CSV (repeatable: three-factor, five-factor, momentum files)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--portfolios", o.portfolios, "Industry portfolio CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--from", o.from, "First month, YYYYMM")->capture_default_str();
  cmd->add_option("--to", o.to, "Last month, YYYYMM")->capture_default_str();
  cmd->add_option("--sectors", o.sectors, "Sector columns")->delimiter(',')->capture_default_str();
  cmd->add_option("--threshold", o.threshold, "Outlier threshold in robust standard deviations")
      ->capture_default_str();
  cmd->add_option("--format", o.format, "json or markdown")->capture_default_str();
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
}

void add_models(CLI::App* cmd, Options& o) {
  cmd->add_option("--models", o.models, "ff3, carhart4, ff5")->delimiter(',')->capture_default_str();
}

void add_lstm(CLI::App* cmd, Options& o) {
  cmd->add_option("--lstm-config", o.lstm_config, "key = value training config file; flags below override it")
      ->check(CLI::ExistingFile);
  cmd->add_option("--window", o.window, "Window length in months")->capture_default_str();
  cmd->add_option("--hidden", o.hidden, "Hidden units")->capture_default_str();
  cmd->add_option("--epochs", o.epochs, "Full-batch epochs")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Initialization seed")->capture_default_str();
  cmd->add_option("--lr", o.learning_rate, "Learning rate")->capture_default_str();
  cmd->add_option("--optimizer", o.optimizer, "adam or sgd")->capture_default_str();
  cmd->add_option("--save-models", o.model_dir, "Directory for trained models (lstm_<sector>.txt)")
      ->check(CLI::ExistingDirectory);
}

factorlab::RunConfig make_config(const Options& o, const std::string& command, const CLI::App& sub) {
  factorlab::RunConfig cfg;
  cfg.command = command;
  cfg.factor_paths = o.factors;
  cfg.portfolio_path = o.portfolios;
  cfg.from = factorlab::YearMonth::from_int(o.from);
  cfg.to = factorlab::YearMonth::from_int(o.to);
  cfg.sectors = o.sectors;
  cfg.models.clear();
  for (const auto& m : o.models) cfg.models.push_back(factorlab::parse_model(m));
  cfg.outlier_threshold = o.threshold;
  cfg.include_coefficients = command == "fit" || command == "report";
  cfg.include_comparison = command == "compare" || command == "report";
  cfg.include_lstm = command == "lstm" || command == "report";
  if (command == "lstm") cfg.models.clear();

  if (cfg.include_lstm) {
    auto& t = cfg.lstm;
    if (!o.lstm_config.empty()) {
      std::ifstream in(o.lstm_config);
      t = factorlab::lstm::read_train_config(in);
    }
    auto given = [&](const char* flag) { return sub.count(flag) > 0; };
    if (o.lstm_config.empty() || given("--window")) t.window = o.window;
    if (o.lstm_config.empty() || given("--hidden")) t.hidden = o.hidden;
    if (o.lstm_config.empty() || given("--epochs")) t.epochs = o.epochs;
    if (o.lstm_config.empty() || given("--seed")) t.seed = o.seed;
    if (o.lstm_config.empty() || given("--lr")) t.learning_rate = o.learning_rate;
    if (o.lstm_config.empty() || given("--optimizer")) t.optimizer = factorlab::lstm::parse_optimizer(o.optimizer);
    if (!o.model_dir.empty()) cfg.model_dir = o.model_dir;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fama-French / Carhart factor regressions and an LSTM forecaster for monthly sector returns"};
  app.require_subcommand(1);
  Options opts;

  auto* fit = app.add_subcommand("fit", "Coefficient tables with significance stars");
  auto* compare = app.add_subcommand("compare", "R-squared, F-test p-value, RMSE and MAE per model");
  auto* lstm = app.add_subcommand("lstm", "Train the LSTM and report test-split metrics");
  auto* report = app.add_subcommand("report", "Everything: coefficients, comparison, LSTM");
  for (auto* cmd : {fit, compare, lstm, report}) add_common(cmd, opts);
  for (auto* cmd : {fit, compare, report}) add_models(cmd, opts);
  for (auto* cmd : {lstm, report}) add_lstm(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto cfg = make_config(opts, sub->get_name(), *sub);
    const auto format = factorlab::parse_format(opts.format);
    const auto text = factorlab::emit_report(factorlab::run_pipeline(cfg), format);
    if (opts.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(opts.out, std::ios::binary);
      if (!out) throw factorlab::InputError("cannot write '" + opts.out + "'");
      out << text;
    }
  } catch (const factorlab::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const factorlab::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
