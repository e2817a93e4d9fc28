#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cpm/rng.hpp"

namespace cpm {

// Integer-lattice marketing vector x, component i = investment units in
// marketing action i. Bounds b constrain x component-wise, b(i) >= 1.
using MarketingVector = Eigen::VectorXi;
using Bounds = Eigen::VectorXi;

inline bool lattice_leq(const MarketingVector& x, const MarketingVector& y) {
  return (x.array() <= y.array()).all();
}

void validate_bounds(const Bounds& b);  // b(i) >= 1

// search-space size prod(b(i)+1), saturating
double lattice_point_count(const Bounds& b);

// Per-node activation parameters for the default strategy function
//   h_u(x) = 1 - prod_i prod_{j=1}^{x(i)} (1 - eta^{j-1} * r(u,i))
// r(u,i) in [0,1], eta in (0,1).
struct StrategyParams {
  Eigen::MatrixXd r;  // n x d
  double eta = 0.8;

  int node_count() const { return static_cast<int>(r.rows()); }
  int dim() const { return static_cast<int>(r.cols()); }
  void validate() const;
};

double seed_probability(const StrategyParams& params, int u, const MarketingVector& x);

// Linear cost c(x) = sum_i unit_costs(i) * x(i).
struct CostModel {
  Eigen::VectorXd unit_costs;

  // uniform cost distribution: c_i = lambda * n / ||b||_1
  static CostModel uniform(double lambda, int n, const Bounds& b);
};

double cost(const CostModel& model, const MarketingVector& x);

// Each node included independently with probability h_u(x).
std::vector<int> sample_seed_set(const StrategyParams& params, const MarketingVector& x,
                                 Rng& rng);

// Each r(u,i) drawn uniformly from ranges[i] = [lo, hi] within [0,1].
StrategyParams sample_random_strategy_params(int node_count, int d,
                                             const std::vector<std::pair<double, double>>& ranges,
                                             double eta, Rng& rng);

// CSV with header "node,action,r"; zero entries omitted on write, missing
// pairs default to 0 on read.
void write_params_csv(std::ostream& os, const StrategyParams& params);
StrategyParams read_params_csv(std::istream& is, int node_count, int d, double eta);

}  // namespace cpm
