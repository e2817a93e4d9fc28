#include "cpm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpm {

void OracleInstance::validate_caps() const {
  if (graph.node_count > kMaxNodes || graph.arc_count > kMaxArcs)
    throw std::invalid_argument("oracle instance exceeds graph caps");
  if (params.dim() > kMaxDim) throw std::invalid_argument("oracle instance exceeds dim cap");
  if (lattice_point_count(bounds) > kMaxLatticePoints)
    throw std::invalid_argument("oracle instance exceeds lattice cap");
}

namespace {

// per-node triggering-set options with probabilities, index-encoded
struct NodeOptions {
  std::vector<std::vector<int>> sets;
  std::vector<double> probs;
};

std::vector<NodeOptions> node_options(const TriggeringModel& model) {
  const Graph& g = *model.graph;
  std::vector<NodeOptions> opts(g.node_count);
  for (int v = 0; v < g.node_count; ++v) {
    const auto& in = g.in_neighbors[v];
    const auto& p = model.in_prob[v];
    NodeOptions& o = opts[v];
    // split arcs into independent (Bernoulli) and LT-weighted groups
    std::vector<std::size_t> bern, weighted;
    for (std::size_t k = 0; k < in.size(); ++k) {
      bool independent = model.kind == ModelKind::IC || in[k] >= model.bernoulli_source_min;
      (independent ? bern : weighted).push_back(k);
    }
    // LT choice: none or one weighted in-neighbor
    std::vector<std::pair<std::vector<int>, double>> lt_part;
    if (weighted.empty()) {
      lt_part.push_back({{}, 1.0});
    } else {
      double sum = 0.0;
      for (std::size_t k : weighted) {
        lt_part.push_back({{in[k]}, p[k]});
        sum += p[k];
      }
      lt_part.push_back({{}, 1.0 - sum});
    }
    // Bernoulli arcs: all subsets
    std::uint64_t subsets = std::uint64_t{1} << bern.size();
    for (auto& [base_set, base_prob] : lt_part) {
      for (std::uint64_t m = 0; m < subsets; ++m) {
        std::vector<int> tv = base_set;
        double prob = base_prob;
        for (std::size_t j = 0; j < bern.size(); ++j) {
          std::size_t k = bern[j];
          if (m >> j & 1) {
            tv.push_back(in[k]);
            prob *= p[k];
          } else {
            prob *= 1.0 - p[k];
          }
        }
        if (prob == 0.0) continue;
        std::sort(tv.begin(), tv.end());
        o.sets.push_back(std::move(tv));
        o.probs.push_back(prob);
      }
    }
  }
  return opts;
}

}  // namespace

void enumerate_realizations(const TriggeringModel& model,
                            const std::function<void(const Realization&, double)>& fn,
                            double max_realizations) {
  const Graph& g = *model.graph;
  auto opts = node_options(model);
  double count = 1.0;
  for (const auto& o : opts) count *= static_cast<double>(o.sets.size());
  if (count > max_realizations)
    throw std::runtime_error("realization enumeration refused: too many realizations");

  Realization r;
  r.triggering_sets.resize(g.node_count);
  std::function<void(int, double)> rec = [&](int v, double prob) {
    if (v == g.node_count) {
      fn(r, prob);
      return;
    }
    for (std::size_t k = 0; k < opts[v].sets.size(); ++k) {
      r.triggering_sets[v] = opts[v].sets[k];
      rec(v + 1, prob * opts[v].probs[k]);
    }
  };
  rec(0, 1.0);
}

namespace {

// forward reach bitmask per node under one realization
std::vector<std::uint64_t> reach_masks(const Graph& g, const Realization& r) {
  const int n = g.node_count;
  std::vector<std::vector<int>> fwd(n);
  for (int v = 0; v < n; ++v)
    for (int u : r.triggering_sets[v]) fwd[u].push_back(v);
  std::vector<std::uint64_t> reach(n);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    std::uint64_t seen = std::uint64_t{1} << s;
    stack.assign(1, s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : fwd[u])
        if (!(seen >> v & 1)) {
          seen |= std::uint64_t{1} << v;
          stack.push_back(v);
        }
    }
    reach[s] = seen;
  }
  return reach;
}

}  // namespace

double exact_sigma(const TriggeringModel& model, const std::vector<int>& seeds) {
  const Graph& g = *model.graph;
  std::uint64_t seed_mask = 0;
  for (int s : seeds) {
    if (s < 0 || s >= g.node_count) throw std::out_of_range("seed out of range");
    seed_mask |= std::uint64_t{1} << s;
  }
  double sigma = 0.0;
  enumerate_realizations(model, [&](const Realization& r, double prob) {
    auto reach = reach_masks(g, r);
    std::uint64_t covered = 0;
    for (int s = 0; s < g.node_count; ++s)
      if (seed_mask >> s & 1) covered |= reach[s];
    sigma += prob * static_cast<double>(std::popcount(covered));
  });
  return sigma;
}

const std::vector<double>& OracleInstance::sigma_table() const {
  if (!sigma_table_.empty()) return sigma_table_;
  validate_caps();
  const int n = graph.node_count;
  const std::uint64_t masks = std::uint64_t{1} << n;
  sigma_table_.assign(masks, 0.0);
  enumerate_realizations(model, [&](const Realization& r, double prob) {
    auto reach = reach_masks(graph, r);
    for (std::uint64_t m = 1; m < masks; ++m) {
      std::uint64_t covered = 0;
      std::uint64_t rem = m;
      while (rem) {
        int s = std::countr_zero(rem);
        rem &= rem - 1;
        covered |= reach[s];
      }
      sigma_table_[m] += prob * static_cast<double>(std::popcount(covered));
    }
  });
  return sigma_table_;
}

double seed_set_probability(const StrategyParams& params, const MarketingVector& x,
                            std::uint64_t mask) {
  double prob = 1.0;
  for (int u = 0; u < params.node_count(); ++u) {
    double h = seed_probability(params, u, x);
    prob *= (mask >> u & 1) ? h : 1.0 - h;
  }
  return prob;
}

double exact_mu(const OracleInstance& inst, const MarketingVector& x) {
  const auto& sigma = inst.sigma_table();
  const int n = inst.graph.node_count;
  std::vector<double> h(n);
  for (int u = 0; u < n; ++u) h[u] = seed_probability(inst.params, u, x);
  double mu = 0.0;
  for (std::uint64_t m = 0; m < sigma.size(); ++m) {
    double prob = 1.0;
    for (int u = 0; u < n; ++u) prob *= (m >> u & 1) ? h[u] : 1.0 - h[u];
    mu += prob * sigma[m];
  }
  return mu;
}

double exact_profit(const OracleInstance& inst, const MarketingVector& x) {
  return exact_mu(inst, x) - cost(inst.cost, x);
}

void for_each_lattice_point(const Bounds& b,
                            const std::function<void(const MarketingVector&)>& fn) {
  MarketingVector x = MarketingVector::Zero(b.size());
  for (;;) {
    fn(x);
    int i = 0;
    while (i < b.size() && x(i) == b(i)) x(i++) = 0;
    if (i == b.size()) return;
    ++x(i);
  }
}

OptResult exact_opt(const OracleInstance& inst) {
  inst.validate_caps();
  OptResult res;
  res.value = -std::numeric_limits<double>::infinity();
  for_each_lattice_point(inst.bounds, [&](const MarketingVector& x) {
    double f = exact_profit(inst, x);
    if (f > res.value + 1e-12) {
      res.value = f;
      res.maximizers.clear();
      res.maximizers.push_back(x);
    } else if (f >= res.value - 1e-12) {
      res.maximizers.push_back(x);
    }
  });
  return res;
}

DrReport check_dr_submodular(LatticeObjective& objective, const Bounds& bounds, long trials,
                             Rng& rng, double tol) {
  DrReport rep;
  rep.trials = trials;
  const int d = static_cast<int>(bounds.size());
  for (long t = 0; t < trials; ++t) {
    MarketingVector x(d), y(d);
    int i = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(d)));
    for (int k = 0; k < d; ++k) {
      int cap = k == i ? bounds(k) - 1 : bounds(k);
      y(k) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(cap + 1)));
      x(k) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(y(k) + 1)));
    }
    double gx = objective.marginal(x, i, +1);
    double gy = objective.marginal(y, i, +1);
    if (gy < 0.0 || gx < 0.0) rep.negative_marginal_found = true;
    double gap = gx - gy;
    if (gap < -tol) ++rep.violations;
    rep.worst_gap = std::min(rep.worst_gap, gap);
  }
  return rep;
}

}  // namespace cpm
