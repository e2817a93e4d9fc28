#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "cpm/graph.hpp"
#include "cpm/lattice.hpp"
#include "cpm/rrset.hpp"
#include "cpm/strategy.hpp"

namespace cpm {

struct Box {
  MarketingVector lower;
  MarketingVector upper;

  void validate() const;  // lower <= upper component-wise
};

// Raised when the estimated lower bound on the optimum is nonpositive and
// the theta_2/theta_3 sample counts are therefore undefined.
struct OptLowerBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Randomized lattice double greedy over [box.lower, box.upper]. The
// objective is consulted through unit-marginal queries only.
MarketingVector double_greedy(LatticeObjective& objective, const Box& box, Rng& rng);

struct PruneTrace {
  std::vector<MarketingVector> g_seq, h_seq;  // per iteration, including t=0
};

// Fixed-point pruning of [0,b] down to [g°,h°] containing every maximizer.
// With `binary_search` the per-component k-scan uses bisection (valid since
// marginals along a coordinate slice are monotone by dr-submodularity).
Box iterative_pruning(LatticeObjective& objective, const Bounds& b,
                      PruneTrace* trace = nullptr, bool binary_search = false);

// Hill-climb from 0 on the largest positive unit marginal (ties: lowest
// index). Returns the reached point.
MarketingVector greedy_ascent(LatticeObjective& objective, const Bounds& b);

// greedy_ascent on f^, then OPT_lb = f^(x) - 2*eps1. Throws
// OptLowerBoundError when the result is nonpositive.
double opt_estimation(RisObjective& f_hat, const Bounds& b, double eps1,
                      MarketingVector* reached = nullptr);

struct SampleSizes {
  std::uint64_t theta1 = 0, theta2 = 0, theta3 = 0;
};

std::uint64_t theta1_count(double eps1, double delta, const Bounds& b, int n);

// theta_1 = sqrt(n^2 ln(3 delta prod(b(i)+1)) / (2 eps1^2))
// theta_2 = n (2n + eps2^2 OPT_lb) ln(3 delta prod(b(i)+1)) / (eps2^2 OPT_lb^2)
// theta_3 = 2 n^2 ln(3 delta) / (eps3^2 OPT_lb^2)
SampleSizes compute_sample_sizes(double eps1, double eps2, double eps3, double delta,
                                 const Bounds& b, int n, double opt_lower);

// Grid search over eps2 in (0, eps), eps3 = 2(eps - eps2), minimizing
// max(theta2, theta3).
std::pair<double, double> choose_eps_split(double eps, double eps1, double delta,
                                           const Bounds& b, int n, double opt_lower);

struct SamplingPlan {
  double eps = 0.0, eps1 = 0.0, eps2 = 0.0, eps3 = 0.0, delta = 0.0;
  double opt_lower = 0.0;
  SampleSizes thetas;

  void validate() const;  // eps2 + eps3/2 == eps within 1e-12
};

struct RunReport {
  MarketingVector chosen_x;
  double objective_estimate = 0.0;
  double condition_a = 0.0;  // f^(0) + f^(b)
  double condition_b = 0.0;  // f^(g°) + f^(h°)
  bool guarantee_holds = false;
  bool cap_applied = false;
  double wall_time_s = 0.0;
  std::uint64_t theta_used = 0;
  std::uint64_t rng_seed = 0;
  SamplingPlan plan;
  Box pruned;

  std::string csv_row() const;
  static std::string csv_header();
  void print(std::ostream& os) const;  // key=value block
};

// Full DG-IP-RIS pipeline. theta_cap = 0 means uncapped; a capped run voids
// the (1/2 - eps) guarantee in the report.
RunReport dg_ip_ris(const Graph& graph, const TriggeringModel& model,
                    const StrategyParams& params, const CostModel& cost_model,
                    const Bounds& b, double eps, double eps1, double delta,
                    std::uint64_t master_seed, std::uint64_t theta_cap = 0,
                    int threads = 1);

enum class BaselineKind { Greedy, Random };

MarketingVector baseline(BaselineKind kind, LatticeObjective& objective, const Bounds& b,
                         Rng& rng);

}  // namespace cpm
