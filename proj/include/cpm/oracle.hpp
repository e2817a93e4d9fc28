#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cpm/graph.hpp"
#include "cpm/lattice.hpp"
#include "cpm/strategy.hpp"

namespace cpm {

// Exhaustive ground truth at desk scale. Hard caps keep full enumeration
// (realizations x seed sets x lattice points) cheap.
struct OracleInstance {
  Graph graph;
  TriggeringModel model;  // model.graph points at this->graph
  StrategyParams params;
  Bounds bounds;
  CostModel cost;

  static constexpr int kMaxNodes = 6;
  static constexpr int kMaxArcs = 8;
  static constexpr int kMaxDim = 3;
  static constexpr double kMaxLatticePoints = 200.0;

  void validate_caps() const;
  // sigma(S) for every seed mask, size 2^n, computed once on first use
  const std::vector<double>& sigma_table() const;

  OracleInstance() = default;
  OracleInstance(const OracleInstance&) = delete;
  OracleInstance& operator=(const OracleInstance&) = delete;
  OracleInstance(OracleInstance&& o) noexcept { *this = std::move(o); }
  OracleInstance& operator=(OracleInstance&& o) noexcept {
    graph = std::move(o.graph);
    model = std::move(o.model);
    params = std::move(o.params);
    bounds = std::move(o.bounds);
    cost = std::move(o.cost);
    sigma_table_ = std::move(o.sigma_table_);
    model.graph = &graph;
    return *this;
  }

 private:
  mutable std::vector<double> sigma_table_;
};

// Calls fn(realization, probability) for every realization of the model.
// Refuses models whose realization count exceeds `max_realizations`.
void enumerate_realizations(const TriggeringModel& model,
                            const std::function<void(const Realization&, double)>& fn,
                            double max_realizations = 1e6);

double exact_sigma(const TriggeringModel& model, const std::vector<int>& seeds);

// Pr[S|x] for the seed set given by bitmask over nodes.
double seed_set_probability(const StrategyParams& params, const MarketingVector& x,
                            std::uint64_t mask);

double exact_mu(const OracleInstance& inst, const MarketingVector& x);
double exact_profit(const OracleInstance& inst, const MarketingVector& x);

struct OptResult {
  std::vector<MarketingVector> maximizers;
  double value = 0.0;
};

OptResult exact_opt(const OracleInstance& inst);

struct DrReport {
  long trials = 0;
  long violations = 0;
  double worst_gap = 0.0;  // most negative (gain_at_x - gain_at_y) seen
  bool negative_marginal_found = false;
};

// Samples random (x <= y, i) with y(i) < b(i) and checks
// f(e_i|x) >= f(e_i|y) - tol. Also searches for a negative unit marginal
// (non-monotonicity witness).
DrReport check_dr_submodular(LatticeObjective& objective, const Bounds& bounds, long trials,
                             Rng& rng, double tol = 1e-9);

class ExactProfitObjective final : public LatticeObjective {
 public:
  explicit ExactProfitObjective(const OracleInstance& inst) : inst_(inst) {}
  double value(const MarketingVector& x) override { return exact_profit(inst_, x); }

 private:
  const OracleInstance& inst_;
};

// Visits every lattice point in [0, b].
void for_each_lattice_point(const Bounds& b,
                            const std::function<void(const MarketingVector&)>& fn);

}  // namespace cpm
