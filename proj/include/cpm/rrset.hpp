#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cpm/graph.hpp"
#include "cpm/lattice.hpp"
#include "cpm/strategy.hpp"

namespace cpm {

// Nodes that reach a uniformly chosen root in one sampled realization.
struct RRSet {
  int root = 0;
  std::vector<int> nodes;  // includes root, sorted
};

struct RRCollection {
  int node_count = 0;
  std::vector<RRSet> sets;
  std::vector<std::vector<std::uint32_t>> membership;  // node -> set indices

  std::size_t theta() const { return sets.size(); }
  void build_membership();
};

RRSet generate_rr_set(const TriggeringModel& model, Rng& rng);

// Set t is generated from the stream derived from (master_seed, t), so the
// collection is independent of the thread count.
RRCollection generate_collection(const TriggeringModel& model, std::uint64_t theta,
                                 std::uint64_t master_seed, int threads = 1);

// p(R,x) = 1 - prod_{u in R} (1 - h_u(x))
double coverage_probability(const RRSet& set, const StrategyParams& params,
                            const MarketingVector& x);

// f^(R,x) = (n/theta) * sum_R p(R,x) - c(x), evaluated from scratch.
double estimate_f_hat(const RRCollection& coll, const StrategyParams& params,
                      const CostModel& cost_model, const MarketingVector& x);

// One RR-set per line: root followed by the remaining member ids.
void write_collection(std::ostream& os, const RRCollection& coll);
RRCollection read_collection(std::istream& is, int node_count);

// Incremental evaluation state for f^(R, x) supporting O(affected) unit
// moves. Survival products are kept factored (zero-factor count + product of
// nonzero factors) so nodes with h_u = 1 never cause a division by zero.
class CoverageState {
 public:
  CoverageState(const RRCollection& coll, const StrategyParams& params,
                const CostModel& cost_model, const Bounds& bounds,
                const MarketingVector& x0);

  const MarketingVector& point() const { return x_; }
  double f_hat() const;

  // f^(x + dir*e_i) - f^(x) without changing the state
  double marginal_gain(int i, int dir) const;
  // apply the move
  void commit(int i, int dir);

  void reset(const MarketingVector& x);

  double node_survival(int u) const { return node_surv_[u].value(); }
  double set_survival(std::size_t s) const { return set_surv_[s].value(); }
  double sum_coverage() const { return static_cast<double>(coll_->theta()) - sum_surv_; }

 private:
  struct Factored {
    int zeros = 0;
    double prod = 1.0;
    double value() const { return zeros > 0 ? 0.0 : prod; }
    void mul(double f) { f == 0.0 ? void(++zeros) : void(prod *= f); }
    void div(double f) { f == 0.0 ? void(--zeros) : void(prod /= f); }
    void replace(double oldv, double newv) {
      oldv == 0.0 ? void(--zeros) : void(prod /= oldv);
      newv == 0.0 ? void(++zeros) : void(prod *= newv);
    }
  };

  void check_move(int i, int dir) const;
  // change in sum of set survivals for the move; scratch holds per-set and
  // per-node updated values for a subsequent write-back
  double stage_move(int i, int dir) const;
  void write_back(int i, int dir, double delta);

  const RRCollection* coll_;
  const StrategyParams* params_;
  const CostModel* cost_;
  Bounds bounds_;
  MarketingVector x_;
  std::vector<Factored> node_surv_;
  std::vector<Factored> set_surv_;
  double sum_surv_ = 0.0;
  std::vector<std::vector<int>> affected_nodes_;  // per action: nodes with r(u,i) > 0

  mutable std::vector<Factored> set_scratch_;
  mutable std::vector<std::uint32_t> set_epoch_;
  mutable std::uint32_t epoch_ = 0;
  mutable std::vector<std::uint32_t> touched_sets_;
  mutable std::vector<std::pair<int, Factored>> node_scratch_;
};

// f^(R,.) as a lattice objective. Keeps two coverage states so the
// alternating query pattern of double greedy stays incremental.
class RisObjective final : public LatticeObjective {
 public:
  RisObjective(const RRCollection& coll, const StrategyParams& params,
               const CostModel& cost_model, const Bounds& bounds);

  double value(const MarketingVector& x) override;
  double marginal(const MarketingVector& x, int i, int dir) override;

 private:
  CoverageState& state_for(const MarketingVector& x);

  const RRCollection& coll_;
  const StrategyParams& params_;
  const CostModel& cost_;
  Bounds bounds_;
  std::optional<CoverageState> states_[2];
  int last_used_ = 0;
};

}  // namespace cpm
