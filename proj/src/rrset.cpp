#include "cpm/rrset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cpm {

void RRCollection::build_membership() {
  membership.assign(node_count, {});
  for (std::uint32_t s = 0; s < sets.size(); ++s)
    for (int u : sets[s].nodes) membership[u].push_back(s);
}

namespace {

struct RRScratch {
  std::vector<char> visited;
  std::vector<int> queue;
};

RRSet generate_one(const TriggeringModel& model, Rng& rng, RRScratch& s) {
  const Graph& g = *model.graph;
  const int n = g.node_count;
  if (static_cast<int>(s.visited.size()) != n) s.visited.assign(n, 0);

  RRSet rr;
  rr.root = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(n)));
  s.queue.clear();
  s.queue.push_back(rr.root);
  s.visited[rr.root] = 1;
  const bool lt = model.kind == ModelKind::LT;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    int v = s.queue[head];
    const auto& in = g.in_neighbors[v];
    const auto& p = model.in_prob[v];
    if (!lt) {
      for (std::size_t k = 0; k < in.size(); ++k)
        if (rng.bernoulli(p[k]) && !s.visited[in[k]]) {
          s.visited[in[k]] = 1;
          s.queue.push_back(in[k]);
        }
    } else {
      // at most one weighted in-arc live; Bernoulli arcs independent
      double u = rng.uniform01();
      double acc = 0.0;
      for (std::size_t k = 0; k < in.size(); ++k) {
        if (in[k] >= model.bernoulli_source_min) {
          if (rng.bernoulli(p[k]) && !s.visited[in[k]]) {
            s.visited[in[k]] = 1;
            s.queue.push_back(in[k]);
          }
          continue;
        }
        acc += p[k];
        if (u < acc) {
          if (!s.visited[in[k]]) {
            s.visited[in[k]] = 1;
            s.queue.push_back(in[k]);
          }
          break;
        }
      }
    }
  }
  rr.nodes = s.queue;
  std::sort(rr.nodes.begin(), rr.nodes.end());
  for (int u : rr.nodes) s.visited[u] = 0;
  return rr;
}

}  // namespace

RRSet generate_rr_set(const TriggeringModel& model, Rng& rng) {
  RRScratch scratch;
  return generate_one(model, rng, scratch);
}

RRCollection generate_collection(const TriggeringModel& model, std::uint64_t theta,
                                 std::uint64_t master_seed, int threads) {
  if (theta < 1) throw std::invalid_argument("theta must be >= 1");
  RRCollection coll;
  coll.node_count = model.graph->node_count;
  coll.sets.resize(theta);
  auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
    RRScratch scratch;
    for (std::uint64_t t = lo; t < hi; ++t) {
      Rng rng = derive_stream(master_seed, t);
      coll.sets[t] = generate_one(model, rng, scratch);
    }
  };
  if (threads <= 1) {
    worker(0, theta);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (theta + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(theta, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  coll.build_membership();
  return coll;
}

double coverage_probability(const RRSet& set, const StrategyParams& params,
                            const MarketingVector& x) {
  double surv = 1.0;
  for (int u : set.nodes) surv *= 1.0 - seed_probability(params, u, x);
  return 1.0 - surv;
}

double estimate_f_hat(const RRCollection& coll, const StrategyParams& params,
                      const CostModel& cost_model, const MarketingVector& x) {
  if (coll.theta() < 1) throw std::invalid_argument("empty collection");
  std::vector<double> h(coll.node_count, -1.0);
  auto h_of = [&](int u) {
    if (h[u] < 0.0) h[u] = seed_probability(params, u, x);
    return h[u];
  };
  double sum = 0.0;
  for (const RRSet& r : coll.sets) {
    double surv = 1.0;
    for (int u : r.nodes) surv *= 1.0 - h_of(u);
    sum += 1.0 - surv;
  }
  return static_cast<double>(coll.node_count) / static_cast<double>(coll.theta()) * sum -
         cost(cost_model, x);
}

void write_collection(std::ostream& os, const RRCollection& coll) {
  for (const RRSet& r : coll.sets) {
    os << r.root;
    for (int u : r.nodes)
      if (u != r.root) os << " " << u;
    os << "\n";
  }
}

RRCollection read_collection(std::istream& is, int node_count) {
  RRCollection coll;
  coll.node_count = node_count;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    RRSet r;
    if (!(ls >> r.root)) throw std::runtime_error("bad RR-set line: " + line);
    r.nodes.push_back(r.root);
    int u;
    while (ls >> u) r.nodes.push_back(u);
    for (int v : r.nodes)
      if (v < 0 || v >= node_count) throw std::runtime_error("RR-set node out of range");
    std::sort(r.nodes.begin(), r.nodes.end());
    coll.sets.push_back(std::move(r));
  }
  coll.build_membership();
  return coll;
}

CoverageState::CoverageState(const RRCollection& coll, const StrategyParams& params,
                             const CostModel& cost_model, const Bounds& bounds,
                             const MarketingVector& x0)
    : coll_(&coll), params_(&params), cost_(&cost_model), bounds_(bounds) {
  if (coll.membership.empty() && coll.node_count > 0 && !coll.sets.empty())
    throw std::invalid_argument("collection membership index not built");
  affected_nodes_.resize(params.dim());
  for (int i = 0; i < params.dim(); ++i)
    for (int u = 0; u < params.node_count(); ++u)
      if (params.r(u, i) > 0.0) affected_nodes_[i].push_back(u);
  set_scratch_.resize(coll.theta());
  set_epoch_.assign(coll.theta(), 0);
  reset(x0);
}

void CoverageState::reset(const MarketingVector& x) {
  if (x.size() != params_->dim()) throw std::invalid_argument("dimension mismatch");
  if ((x.array() < 0).any() || !lattice_leq(x, bounds_))
    throw std::out_of_range("x outside [0,b]");
  x_ = x;
  node_surv_.assign(params_->node_count(), Factored{});
  for (int u = 0; u < params_->node_count(); ++u) {
    for (int i = 0; i < params_->dim(); ++i) {
      double rui = params_->r(u, i);
      if (rui == 0.0) continue;
      double att = 1.0;
      for (int j = 0; j < x(i); ++j) {
        node_surv_[u].mul(1.0 - att * rui);
        att *= params_->eta;
      }
    }
  }
  set_surv_.assign(coll_->theta(), Factored{});
  sum_surv_ = 0.0;
  for (std::size_t s = 0; s < coll_->theta(); ++s) {
    for (int u : coll_->sets[s].nodes) {
      double sv = node_surv_[u].value();
      set_surv_[s].mul(sv);
    }
    sum_surv_ += set_surv_[s].value();
  }
}

double CoverageState::f_hat() const {
  double n = static_cast<double>(coll_->node_count);
  double theta = static_cast<double>(coll_->theta());
  return n / theta * (theta - sum_surv_) - cost(*cost_, x_);
}

void CoverageState::check_move(int i, int dir) const {
  if (i < 0 || i >= x_.size()) throw std::out_of_range("component out of range");
  if (dir != 1 && dir != -1) throw std::invalid_argument("direction must be +1 or -1");
  int nv = x_(i) + dir;
  if (nv < 0 || nv > bounds_(i)) throw std::out_of_range("move leaves [0,b]");
}

double CoverageState::stage_move(int i, int dir) const {
  // factor for the unit being added (exponent x(i)) or removed (x(i)-1)
  int expo = dir > 0 ? x_(i) : x_(i) - 1;
  double eta_pow = std::pow(params_->eta, expo);
  ++epoch_;
  touched_sets_.clear();
  node_scratch_.clear();
  for (int u : affected_nodes_[i]) {
    double f = 1.0 - eta_pow * params_->r(u, i);
    Factored nu = node_surv_[u];
    dir > 0 ? nu.mul(f) : nu.div(f);
    node_scratch_.emplace_back(u, nu);
    double s_old = node_surv_[u].value();
    double s_new = nu.value();
    if (s_old == s_new) continue;
    for (std::uint32_t s : coll_->membership[u]) {
      if (set_epoch_[s] != epoch_) {
        set_epoch_[s] = epoch_;
        set_scratch_[s] = set_surv_[s];
        touched_sets_.push_back(s);
      }
      set_scratch_[s].replace(s_old, s_new);
    }
  }
  double delta = 0.0;
  for (std::uint32_t s : touched_sets_)
    delta += set_scratch_[s].value() - set_surv_[s].value();
  return delta;
}

double CoverageState::marginal_gain(int i, int dir) const {
  check_move(i, dir);
  double delta = stage_move(i, dir);
  double n = static_cast<double>(coll_->node_count);
  double theta = static_cast<double>(coll_->theta());
  return -n / theta * delta - dir * cost_->unit_costs(i);
}

void CoverageState::write_back(int i, int dir, double delta) {
  for (auto& [u, nu] : node_scratch_) node_surv_[u] = nu;
  for (std::uint32_t s : touched_sets_) set_surv_[s] = set_scratch_[s];
  sum_surv_ += delta;
  x_(i) += dir;
}

void CoverageState::commit(int i, int dir) {
  check_move(i, dir);
  double delta = stage_move(i, dir);
  write_back(i, dir, delta);
}

RisObjective::RisObjective(const RRCollection& coll, const StrategyParams& params,
                           const CostModel& cost_model, const Bounds& bounds)
    : coll_(coll), params_(params), cost_(cost_model), bounds_(bounds) {}

CoverageState& RisObjective::state_for(const MarketingVector& x) {
  // exact hit
  for (int k = 0; k < 2; ++k)
    if (states_[k] && states_[k]->point() == x) {
      last_used_ = k;
      return *states_[k];
    }
  // one unit move away from a cached point: commit instead of rebuilding
  for (int k = 0; k < 2; ++k) {
    if (!states_[k]) continue;
    MarketingVector diff = x - states_[k]->point();
    int moved = -1, dir = 0;
    bool single = true;
    for (int i = 0; i < diff.size() && single; ++i) {
      if (diff(i) == 0) continue;
      if (moved >= 0 || (diff(i) != 1 && diff(i) != -1))
        single = false;
      else {
        moved = i;
        dir = diff(i);
      }
    }
    if (single && moved >= 0) {
      states_[k]->commit(moved, dir);
      last_used_ = k;
      return *states_[k];
    }
  }
  int victim = 1 - last_used_;
  states_[victim].emplace(coll_, params_, cost_, bounds_, x);
  last_used_ = victim;
  return *states_[victim];
}

double RisObjective::value(const MarketingVector& x) {
  return estimate_f_hat(coll_, params_, cost_, x);
}

double RisObjective::marginal(const MarketingVector& x, int i, int dir) {
  return state_for(x).marginal_gain(i, dir);
}

}  // namespace cpm
