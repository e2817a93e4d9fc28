#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cpm/graph.hpp"
#include "cpm/lattice.hpp"
#include "cpm/strategy.hpp"

namespace cpm {

struct SpreadEstimate {
  double mean = 0.0;
  std::int64_t samples = 0;
  double std_error = 0.0;
};

// Number of nodes activated by `seeds` in one freshly sampled realization.
int diffuse_once(const TriggeringModel& model, const std::vector<int>& seeds, Rng& rng);

// Monte-Carlo mean of diffuse_once. Sample k uses the stream derived from
// (master_seed, k), so the result is independent of `threads`.
SpreadEstimate estimate_sigma(const TriggeringModel& model, const std::vector<int>& seeds,
                              std::int64_t samples, std::uint64_t master_seed,
                              int threads = 1);

// Graph with one pseudo node u~ and arc (u~, u) of probability h_u(x) per
// original node; seeding x on G is equivalent to seeding the pseudo nodes on
// the constructed graph, sigma~ - n = mu(x).
struct ConstructedGraph {
  Graph graph;            // 2n nodes: originals [0,n), pseudo [n,2n)
  TriggeringModel model;  // model.graph points at this->graph
  std::vector<int> pseudo_seeds;

  ConstructedGraph() = default;
  ConstructedGraph(const ConstructedGraph&) = delete;
  ConstructedGraph& operator=(const ConstructedGraph&) = delete;
  ConstructedGraph(ConstructedGraph&& o) noexcept
      : graph(std::move(o.graph)), model(std::move(o.model)),
        pseudo_seeds(std::move(o.pseudo_seeds)) {
    model.graph = &graph;
  }
  ConstructedGraph& operator=(ConstructedGraph&& o) noexcept {
    graph = std::move(o.graph);
    model = std::move(o.model);
    pseudo_seeds = std::move(o.pseudo_seeds);
    model.graph = &graph;
    return *this;
  }
};

ConstructedGraph build_constructed_graph(const Graph& graph, const TriggeringModel& base,
                                         const StrategyParams& params,
                                         const MarketingVector& x);

// Profit estimate (sigma~ - n) - c(x) via the constructed graph.
SpreadEstimate estimate_profit_mc(const Graph& graph, const TriggeringModel& base,
                                  const StrategyParams& params, const CostModel& cost_model,
                                  const MarketingVector& x, std::int64_t samples,
                                  std::uint64_t master_seed, int threads = 1);

// Two-stage estimate: sample a seed set from h(x), then diffuse on the
// original graph. Distribution-equivalent to the constructed-graph route.
SpreadEstimate estimate_profit_two_stage(const Graph& graph, const TriggeringModel& base,
                                         const StrategyParams& params,
                                         const CostModel& cost_model,
                                         const MarketingVector& x, std::int64_t samples,
                                         std::uint64_t master_seed);

// Simulation count for a (gamma,delta)-approximation of mu(x):
//   r >= n^2 ln(2/delta) / (2 (gamma * sum_u h_u(x))^2)
// Throws if sum_u h_u(x) == 0.
std::int64_t required_mc_samples(const StrategyParams& params, const MarketingVector& x,
                                 double gamma, double delta);

// Lattice objective backed by Monte-Carlo profit estimation. Values are
// cached per point with a per-point derived seed, so repeated queries within
// a run return identical values.
class McProfitObjective final : public LatticeObjective {
 public:
  McProfitObjective(const Graph& graph, const TriggeringModel& base,
                    const StrategyParams& params, const CostModel& cost_model,
                    std::int64_t samples, std::uint64_t master_seed, int threads = 1)
      : graph_(graph), base_(base), params_(params), cost_(cost_model),
        samples_(samples), master_seed_(master_seed), threads_(threads) {}

  double value(const MarketingVector& x) override;
  std::int64_t evaluations() const { return evaluations_; }

 private:
  const Graph& graph_;
  const TriggeringModel& base_;
  const StrategyParams& params_;
  const CostModel& cost_;
  std::int64_t samples_;
  std::uint64_t master_seed_;
  int threads_;
  std::int64_t evaluations_ = 0;
  std::map<std::vector<int>, double> cache_;
};

}  // namespace cpm
