// Writes a synthetic set of French-library-style input files into a directory:
// ff3.csv, ff5.csv, mom.csv, industries.csv. Usage: make_fixture <dir> [seed]

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "support.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_fixture <dir> [seed]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;
  std::filesystem::create_directories(dir);
  const auto market = testing_support::make_market(seed);
  testing_support::write_text((dir / "ff3.csv").string(), testing_support::three_factor_csv(market));
  testing_support::write_text((dir / "ff5.csv").string(), testing_support::five_factor_csv(market));
  testing_support::write_text((dir / "mom.csv").string(), testing_support::momentum_csv(market));
  testing_support::write_text((dir / "industries.csv").string(), testing_support::industry_csv(market));
  return 0;
}
