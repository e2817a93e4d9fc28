#include "cpm/diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace cpm {

namespace {

// Forward arc index: per source node, (target, probability) pairs.
struct ForwardIndex {
  std::vector<std::vector<std::pair<int, double>>> arcs;

  explicit ForwardIndex(const TriggeringModel& model) {
    const Graph& g = *model.graph;
    arcs.resize(g.node_count);
    for (int v = 0; v < g.node_count; ++v)
      for (std::size_t k = 0; k < g.in_neighbors[v].size(); ++k)
        arcs[g.in_neighbors[v][k]].emplace_back(v, model.in_prob[v][k]);
  }
};

struct SimScratch {
  std::vector<char> active;
  std::vector<int> frontier, next, touched;
  std::vector<int> lt_choice;  // -2 unsampled, -1 none, else chosen in-neighbor
};

int simulate(const TriggeringModel& model, const ForwardIndex& fwd,
             const std::vector<int>& seeds, Rng& rng, SimScratch& s) {
  const Graph& g = *model.graph;
  const int n = g.node_count;
  if (static_cast<int>(s.active.size()) != n) {
    s.active.assign(n, 0);
    s.lt_choice.assign(n, -2);
  }
  s.frontier.clear();
  s.touched.clear();

  auto sample_lt_choice = [&](int v) {
    double u = rng.uniform01();
    double acc = 0.0;
    int chosen = -1;
    const auto& in = g.in_neighbors[v];
    const auto& p = model.in_prob[v];
    for (std::size_t k = 0; k < in.size(); ++k) {
      if (in[k] >= model.bernoulli_source_min) continue;
      acc += p[k];
      if (u < acc) {
        chosen = in[k];
        break;
      }
    }
    return chosen;
  };

  int count = 0;
  for (int v : seeds) {
    if (v < 0 || v >= n) throw std::out_of_range("seed out of range");
    if (!s.active[v]) {
      s.active[v] = 1;
      s.frontier.push_back(v);
      s.touched.push_back(v);
      ++count;
    }
  }

  const bool lt = model.kind == ModelKind::LT;
  while (!s.frontier.empty()) {
    s.next.clear();
    for (int u : s.frontier) {
      for (auto [v, p] : fwd.arcs[u]) {
        if (s.active[v]) continue;
        bool fires;
        if (!lt || u >= model.bernoulli_source_min) {
          fires = rng.bernoulli(p);
        } else {
          if (s.lt_choice[v] == -2) {
            s.lt_choice[v] = sample_lt_choice(v);
            s.touched.push_back(~v);  // mark for reset
          }
          fires = s.lt_choice[v] == u;
        }
        if (fires) {
          s.active[v] = 1;
          s.next.push_back(v);
          s.touched.push_back(v);
          ++count;
        }
      }
    }
    std::swap(s.frontier, s.next);
  }

  for (int t : s.touched) {
    if (t >= 0)
      s.active[t] = 0;
    else
      s.lt_choice[~t] = -2;
  }
  return count;
}

SpreadEstimate reduce(const std::vector<int>& counts) {
  SpreadEstimate e;
  e.samples = static_cast<std::int64_t>(counts.size());
  double sum = 0.0, sumsq = 0.0;
  for (int c : counts) {
    sum += c;
    sumsq += static_cast<double>(c) * c;
  }
  e.mean = sum / e.samples;
  if (e.samples > 1) {
    double var = (sumsq - sum * sum / e.samples) / (e.samples - 1);
    e.std_error = std::sqrt(std::max(0.0, var) / e.samples);
  }
  return e;
}

std::vector<int> run_samples(const TriggeringModel& model, const std::vector<int>& seeds,
                             std::int64_t samples, std::uint64_t master_seed, int threads) {
  ForwardIndex fwd(model);
  std::vector<int> counts(samples);
  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    SimScratch scratch;
    for (std::int64_t k = lo; k < hi; ++k) {
      Rng rng = derive_stream(master_seed, static_cast<std::uint64_t>(k));
      counts[k] = simulate(model, fwd, seeds, rng, scratch);
    }
  };
  if (threads <= 1) {
    worker(0, samples);
  } else {
    std::vector<std::thread> pool;
    std::int64_t chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(samples, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return counts;
}

}  // namespace

int diffuse_once(const TriggeringModel& model, const std::vector<int>& seeds, Rng& rng) {
  ForwardIndex fwd(model);
  SimScratch scratch;
  return simulate(model, fwd, seeds, rng, scratch);
}

SpreadEstimate estimate_sigma(const TriggeringModel& model, const std::vector<int>& seeds,
                              std::int64_t samples, std::uint64_t master_seed, int threads) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  return reduce(run_samples(model, seeds, samples, master_seed, threads));
}

ConstructedGraph build_constructed_graph(const Graph& graph, const TriggeringModel& base,
                                         const StrategyParams& params,
                                         const MarketingVector& x) {
  const int n = graph.node_count;
  ConstructedGraph cg;
  Graph& g = cg.graph;
  g.node_count = 2 * n;
  g.arc_count = graph.arc_count + n;
  g.out_neighbors.resize(2 * n);
  g.in_neighbors.resize(2 * n);
  cg.model.kind = base.kind;
  cg.model.bernoulli_source_min = n;
  cg.model.in_prob.resize(2 * n);
  for (int v = 0; v < n; ++v) {
    g.out_neighbors[v] = graph.out_neighbors[v];
    g.in_neighbors[v] = graph.in_neighbors[v];
    cg.model.in_prob[v] = base.in_prob[v];
    // pseudo node n+v seeds v with probability h_v(x)
    g.in_neighbors[v].push_back(n + v);
    cg.model.in_prob[v].push_back(seed_probability(params, v, x));
    g.out_neighbors[n + v].push_back(v);
    cg.pseudo_seeds.push_back(n + v);
  }
  cg.model.graph = &cg.graph;
  return cg;
}

SpreadEstimate estimate_profit_mc(const Graph& graph, const TriggeringModel& base,
                                  const StrategyParams& params, const CostModel& cost_model,
                                  const MarketingVector& x, std::int64_t samples,
                                  std::uint64_t master_seed, int threads) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  ConstructedGraph cg = build_constructed_graph(graph, base, params, x);
  SpreadEstimate e = estimate_sigma(cg.model, cg.pseudo_seeds, samples, master_seed, threads);
  e.mean = e.mean - graph.node_count - cost(cost_model, x);
  return e;
}

SpreadEstimate estimate_profit_two_stage(const Graph& graph, const TriggeringModel& base,
                                         const StrategyParams& params,
                                         const CostModel& cost_model,
                                         const MarketingVector& x, std::int64_t samples,
                                         std::uint64_t master_seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  ForwardIndex fwd(base);
  SimScratch scratch;
  std::vector<int> counts(samples);
  for (std::int64_t k = 0; k < samples; ++k) {
    Rng rng = derive_stream(master_seed, static_cast<std::uint64_t>(k));
    std::vector<int> seeds = sample_seed_set(params, x, rng);
    counts[k] = simulate(base, fwd, seeds, rng, scratch);
  }
  SpreadEstimate e = reduce(counts);
  e.mean -= cost(cost_model, x);
  return e;
}

std::int64_t required_mc_samples(const StrategyParams& params, const MarketingVector& x,
                                 double gamma, double delta) {
  if (gamma <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("need gamma > 0 and delta in (0,1)");
  double sum_h = 0.0;
  for (int u = 0; u < params.node_count(); ++u) sum_h += seed_probability(params, u, x);
  if (sum_h == 0.0) throw std::invalid_argument("sample-count rule undefined at x=0");
  double n = static_cast<double>(params.node_count());
  double r = n * n * std::log(2.0 / delta) / (2.0 * gamma * gamma * sum_h * sum_h);
  return static_cast<std::int64_t>(std::ceil(r));
}

double McProfitObjective::value(const MarketingVector& x) {
  std::vector<int> key(x.data(), x.data() + x.size());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  // per-point seed so the cached value does not depend on query order
  std::uint64_t s = master_seed_;
  for (int v : key) s = s * 0x100000001b3ULL ^ static_cast<std::uint64_t>(v + 1);
  SpreadEstimate e =
      estimate_profit_mc(graph_, base_, params_, cost_, x, samples_, s, threads_);
  ++evaluations_;
  cache_.emplace(std::move(key), e.mean);
  return e.mean;
}

}  // namespace cpm
