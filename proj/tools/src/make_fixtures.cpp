// Writes the synthetic datasets used by the CLI tests into the given directory.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gmol/distribution.hpp"
#include "gmol/simulate.hpp"
#include "gmol_cli/csv.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 1;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);

  {
    const gmol::GmolParams lomax(1.0, 1.0, 2.5, 3.0);
    std::vector<std::vector<double>> rows;
    for (const double x : gmol::sample(300, lomax, 20240101)) rows.push_back({x});
    std::ofstream f(dir / "lomax_sample.csv", std::ios::binary);
    gmol::cli::write_csv(f, {"time"}, rows);
  }

  {
    gmol::RegParams zeta;
    zeta.alpha = 0.5;
    zeta.lambda = 0.3;
    zeta.eta1 = Eigen::Vector2d(0.6, 0.8);
    zeta.eta2 = Eigen::Vector2d(0.2, 0.4);
    const double bound = gmol::calibrate_censoring_bound(0.10, zeta, 100'000, 11);
    const gmol::CensoredDesign d = gmol::simulate_censored_design(zeta, 300, bound, 12);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < d.size(); ++i) {
      rows.push_back({d.times()[i], static_cast<double>(d.status()[i]),
                      d.covariates()(static_cast<Eigen::Index>(i), 1)});
    }
    std::ofstream f(dir / "censored_sample.csv", std::ios::binary);
    gmol::cli::write_csv(f, {"time", "status", "v"}, rows);
  }
  return 0;
}
