#include "cpm/strategy.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cpm {

void validate_bounds(const Bounds& b) {
  if (b.size() == 0) throw std::invalid_argument("empty bounds");
  if ((b.array() < 1).any()) throw std::invalid_argument("bounds must be >= 1");
}

double lattice_point_count(const Bounds& b) {
  double prod = 1.0;
  for (int i = 0; i < b.size(); ++i) prod *= static_cast<double>(b(i)) + 1.0;
  return prod;
}

void StrategyParams::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must be in (0,1)");
  if ((r.array() < 0.0).any() || (r.array() > 1.0).any())
    throw std::invalid_argument("r entries must be in [0,1]");
}

double seed_probability(const StrategyParams& params, int u, const MarketingVector& x) {
  if (u < 0 || u >= params.node_count()) throw std::out_of_range("node id out of range");
  if (x.size() != params.dim()) throw std::invalid_argument("dimension mismatch");
  double survival = 1.0;
  for (int i = 0; i < x.size(); ++i) {
    double rui = params.r(u, i);
    if (rui == 0.0) continue;
    double att = 1.0;  // eta^{j-1}
    for (int j = 0; j < x(i); ++j) {
      survival *= 1.0 - att * rui;
      att *= params.eta;
    }
  }
  return 1.0 - survival;
}

CostModel CostModel::uniform(double lambda, int n, const Bounds& b) {
  validate_bounds(b);
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  double c = lambda * static_cast<double>(n) / static_cast<double>(b.sum());
  CostModel m;
  m.unit_costs = Eigen::VectorXd::Constant(b.size(), c);
  return m;
}

double cost(const CostModel& model, const MarketingVector& x) {
  if (x.size() != model.unit_costs.size()) throw std::invalid_argument("dimension mismatch");
  return model.unit_costs.dot(x.cast<double>());
}

std::vector<int> sample_seed_set(const StrategyParams& params, const MarketingVector& x,
                                 Rng& rng) {
  std::vector<int> seeds;
  for (int u = 0; u < params.node_count(); ++u)
    if (rng.bernoulli(seed_probability(params, u, x))) seeds.push_back(u);
  return seeds;
}

StrategyParams sample_random_strategy_params(int node_count, int d,
                                             const std::vector<std::pair<double, double>>& ranges,
                                             double eta, Rng& rng) {
  if (static_cast<int>(ranges.size()) != d)
    throw std::invalid_argument("need one range per action");
  for (auto [lo, hi] : ranges)
    if (lo < 0.0 || hi > 1.0 || lo > hi)
      throw std::invalid_argument("range must be a subinterval of [0,1]");
  StrategyParams p;
  p.eta = eta;
  p.r.resize(node_count, d);
  for (int u = 0; u < node_count; ++u)
    for (int i = 0; i < d; ++i) p.r(u, i) = rng.uniform(ranges[i].first, ranges[i].second);
  p.validate();
  return p;
}

void write_params_csv(std::ostream& os, const StrategyParams& params) {
  os << "node,action,r\n";
  for (int u = 0; u < params.node_count(); ++u)
    for (int i = 0; i < params.dim(); ++i)
      if (params.r(u, i) != 0.0) {
        std::ostringstream val;
        val.precision(17);
        val << params.r(u, i);
        os << u << "," << i << "," << val.str() << "\n";
      }
}

StrategyParams read_params_csv(std::istream& is, int node_count, int d, double eta) {
  StrategyParams p;
  p.eta = eta;
  p.r = Eigen::MatrixXd::Zero(node_count, d);
  std::string line;
  if (!std::getline(is, line) || line.rfind("node,action,r", 0) != 0)
    throw std::runtime_error("params CSV: missing header");
  std::int64_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int u, i;
    double val;
    char c1, c2;
    if (!(ls >> u >> c1 >> i >> c2 >> val) || c1 != ',' || c2 != ',' || u < 0 ||
        u >= node_count || i < 0 || i >= d)
      throw std::runtime_error("params CSV: bad line " + std::to_string(line_no));
    p.r(u, i) = val;
  }
  p.validate();
  return p;
}

}  // namespace cpm
