#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cpm/graph.hpp"

namespace cpm {

// Flat key=value run configuration; lists comma-separated, r ranges as
// lo:hi pairs. Defaults mirror the standard experiment settings.
struct RunConfig {
  std::string dataset;
  bool undirected = false;
  ModelKind model = ModelKind::IC;
  int d = 5;
  std::vector<int> bounds = {5, 5, 5, 5, 5};
  double eta = 0.8;
  std::vector<std::pair<double, double>> r_ranges = {
      {0.0, 0.1}, {0.0, 0.05}, {0.0, 0.1}, {0.0, 0.05}, {0.0, 0.05}};
  std::vector<double> lambdas = {0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<std::string> algos = {"DG", "DGIT", "DGS", "DGITS", "Greedy", "GreedyS", "Random"};
  std::int64_t mc_samples = 2000;
  std::int64_t eval_samples = 10000;
  double eps = 0.15;
  double eps1 = 0.1;
  double delta = 10.0;
  std::uint64_t theta_cap = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string outdir = ".";

  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

void serialize_config(std::ostream& os, const RunConfig& cfg);
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

// single "key=value" override, same keys as the file format
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace cpm
