#include "cpm/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

namespace cpm {

void Box::validate() const {
  if (lower.size() != upper.size()) throw std::invalid_argument("box dimension mismatch");
  if ((lower.array() < 0).any() || !lattice_leq(lower, upper))
    throw std::invalid_argument("invalid box: need 0 <= lower <= upper");
}

MarketingVector double_greedy(LatticeObjective& objective, const Box& box, Rng& rng) {
  box.validate();
  MarketingVector x = box.lower, y = box.upper;
  for (int i = 0; i < x.size(); ++i) {
    while (x(i) < y(i)) {
      double a = objective.marginal(x, i, +1);
      double b = objective.marginal(y, i, -1);
      double ap = std::max(a, 0.0), bp = std::max(b, 0.0);
      double p = ap + bp == 0.0 ? 1.0 : ap / (ap + bp);
      if (rng.uniform01() <= p)
        ++x(i);
      else
        --y(i);
    }
  }
  return x;
}

namespace {

// largest k in [1, span] with pred(k), or 0 if none; pred is monotone
// non-increasing in k for dr-submodular objectives
int largest_k(int span, const std::function<bool(int)>& pred, bool binary_search) {
  if (span <= 0) return 0;
  if (!binary_search) {
    int best = 0;
    for (int k = 1; k <= span; ++k)
      if (pred(k)) best = k;
    return best;
  }
  if (!pred(1)) return 0;
  int lo = 1, hi = span;  // pred(lo) true
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (pred(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

Box iterative_pruning(LatticeObjective& objective, const Bounds& b, PruneTrace* trace,
                      bool binary_search) {
  validate_bounds(b);
  const int d = static_cast<int>(b.size());
  MarketingVector g = MarketingVector::Zero(d), h = b;
  if (trace) {
    trace->g_seq = {g};
    trace->h_seq = {h};
  }
  for (;;) {
    MarketingVector gn = g, hn = h;
    for (int i = 0; i < d; ++i) {
      int span = h(i) - g(i);
      if (span == 0) continue;
      // raise g(i): marginals taken at h with component i pulled down to g(i)
      MarketingVector zg = h;
      zg(i) = g(i);
      int kg = largest_k(
          span,
          [&](int k) {
            MarketingVector z = zg;
            z(i) = g(i) + k - 1;
            return objective.marginal(z, i, +1) > 0.0;
          },
          binary_search);
      gn(i) = g(i) + kg;
      // lower h(i): marginals taken along the slice through g
      int kh = largest_k(
          span,
          [&](int k) {
            MarketingVector z = g;
            z(i) = g(i) + k - 1;
            return objective.marginal(z, i, +1) >= 0.0;
          },
          binary_search);
      hn(i) = g(i) + kh;
      if (gn(i) > hn(i)) gn(i) = hn(i);  // can only trigger on non-dr objectives
    }
    if (!lattice_leq(g, gn) || !lattice_leq(hn, h))
      throw std::logic_error("pruning nesting invariant violated");
    bool fixed = gn == g && hn == h;
    g = gn;
    h = hn;
    if (trace) {
      trace->g_seq.push_back(g);
      trace->h_seq.push_back(h);
    }
    if (fixed) break;
  }
  return Box{g, h};
}

MarketingVector greedy_ascent(LatticeObjective& objective, const Bounds& b) {
  validate_bounds(b);
  const int d = static_cast<int>(b.size());
  MarketingVector x = MarketingVector::Zero(d);
  std::int64_t budget = b.cast<std::int64_t>().sum();
  for (std::int64_t t = 0; t < budget; ++t) {
    int best = -1;
    double best_gain = 0.0;
    for (int i = 0; i < d; ++i) {
      if (x(i) >= b(i)) continue;
      double gain = objective.marginal(x, i, +1);
      if (best < 0 || gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    if (best < 0 || best_gain <= 0.0) break;
    ++x(best);
  }
  return x;
}

double opt_estimation(RisObjective& f_hat, const Bounds& b, double eps1,
                      MarketingVector* reached) {
  MarketingVector x = greedy_ascent(f_hat, b);
  if (reached) *reached = x;
  double opt_lower = f_hat.value(x) - 2.0 * eps1;
  if (opt_lower <= 0.0)
    throw OptLowerBoundError("OPT lower bound nonpositive (" + std::to_string(opt_lower) +
                             "); theta_2/theta_3 undefined");
  return opt_lower;
}

namespace {

std::uint64_t ceil_count(double v) {
  if (!(v > 0.0)) return 1;
  double c = std::ceil(v);
  if (c >= 1e18) return static_cast<std::uint64_t>(1e18);
  return static_cast<std::uint64_t>(c);
}

}  // namespace

std::uint64_t theta1_count(double eps1, double delta, const Bounds& b, int n) {
  if (eps1 <= 0.0 || delta <= 0.0) throw std::invalid_argument("eps1, delta must be > 0");
  double log_term = std::log(3.0 * delta * lattice_point_count(b));
  double nn = static_cast<double>(n);
  return ceil_count(std::sqrt(nn * nn * log_term / (2.0 * eps1 * eps1)));
}

SampleSizes compute_sample_sizes(double eps1, double eps2, double eps3, double delta,
                                 const Bounds& b, int n, double opt_lower) {
  if (eps1 <= 0.0 || eps2 <= 0.0 || eps3 <= 0.0 || delta <= 0.0)
    throw std::invalid_argument("epsilons and delta must be > 0");
  if (opt_lower <= 0.0) throw OptLowerBoundError("opt_lower must be > 0");
  double nn = static_cast<double>(n);
  double log_all = std::log(3.0 * delta * lattice_point_count(b));
  SampleSizes s;
  s.theta1 = theta1_count(eps1, delta, b, n);
  s.theta2 = ceil_count(nn * (2.0 * nn + eps2 * eps2 * opt_lower) * log_all /
                        (eps2 * eps2 * opt_lower * opt_lower));
  s.theta3 =
      ceil_count(2.0 * nn * nn * std::log(3.0 * delta) / (eps3 * eps3 * opt_lower * opt_lower));
  return s;
}

std::pair<double, double> choose_eps_split(double eps, double eps1, double delta,
                                           const Bounds& b, int n, double opt_lower) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must be in (0, 1/2)");
  const int grid = 1000;
  double best2 = eps / 2.0, best3 = eps;
  double best_max = std::numeric_limits<double>::infinity();
  for (int k = 1; k < grid; ++k) {
    double e2 = eps * k / grid;
    double e3 = 2.0 * (eps - e2);
    SampleSizes s = compute_sample_sizes(eps1, e2, e3, delta, b, n, opt_lower);
    double m = static_cast<double>(std::max(s.theta2, s.theta3));
    if (m < best_max) {
      best_max = m;
      best2 = e2;
      best3 = e3;
    }
  }
  return {best2, best3};
}

void SamplingPlan::validate() const {
  if (std::abs(eps2 + 0.5 * eps3 - eps) > 1e-12)
    throw std::invalid_argument("sampling plan requires eps2 + eps3/2 == eps");
  if (eps1 <= 0.0 || eps2 <= 0.0 || eps3 <= 0.0 || delta <= 0.0)
    throw std::invalid_argument("sampling plan parameters must be > 0");
}

namespace {

std::string vec_str(const MarketingVector& x) {
  std::ostringstream os;
  for (int i = 0; i < x.size(); ++i) os << (i ? ";" : "") << x(i);
  return os.str();
}

}  // namespace

std::string RunReport::csv_header() {
  return "chosen_x,objective_estimate,condition_a,condition_b,guarantee,cap_applied,"
         "theta_used,opt_lower,eps,eps1,eps2,eps3,delta,wall_time_s,seed";
}

std::string RunReport::csv_row() const {
  std::ostringstream os;
  os.precision(12);
  os << vec_str(chosen_x) << "," << objective_estimate << "," << condition_a << ","
     << condition_b << "," << (guarantee_holds ? 1 : 0) << "," << (cap_applied ? 1 : 0) << ","
     << theta_used << "," << plan.opt_lower << "," << plan.eps << "," << plan.eps1 << ","
     << plan.eps2 << "," << plan.eps3 << "," << plan.delta << "," << wall_time_s << ","
     << rng_seed;
  return os.str();
}

void RunReport::print(std::ostream& os) const {
  os.precision(12);
  os << "chosen_x=" << vec_str(chosen_x) << "\n"
     << "objective_estimate=" << objective_estimate << "\n"
     << "condition_a=" << condition_a << "\n"
     << "condition_b=" << condition_b << "\n"
     << "guarantee_holds=" << (guarantee_holds ? 1 : 0) << "\n"
     << "cap_applied=" << (cap_applied ? 1 : 0) << "\n"
     << "pruned_lower=" << vec_str(pruned.lower) << "\n"
     << "pruned_upper=" << vec_str(pruned.upper) << "\n"
     << "theta_used=" << theta_used << "\n"
     << "opt_lower=" << plan.opt_lower << "\n"
     << "wall_time_s=" << wall_time_s << "\n"
     << "rng_seed=" << rng_seed << "\n";
}

RunReport dg_ip_ris(const Graph& graph, const TriggeringModel& model,
                    const StrategyParams& params, const CostModel& cost_model,
                    const Bounds& b, double eps, double eps1, double delta,
                    std::uint64_t master_seed, std::uint64_t theta_cap, int threads) {
  validate_bounds(b);
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.rng_seed = master_seed;
  rep.plan.eps = eps;
  rep.plan.eps1 = eps1;
  rep.plan.delta = delta;

  const int n = graph.node_count;
  std::uint64_t theta1 = theta1_count(eps1, delta, b, n);
  std::uint64_t theta1_run = theta1;
  if (theta_cap > 0 && theta1_run > theta_cap) {
    theta1_run = theta_cap;
    rep.cap_applied = true;
  }
  RRCollection coll1 = generate_collection(model, theta1_run, derive_seed(master_seed, 1), threads);
  RisObjective f1(coll1, params, cost_model, b);
  rep.plan.opt_lower = opt_estimation(f1, b, eps1);

  auto [eps2, eps3] = choose_eps_split(eps, eps1, delta, b, n, rep.plan.opt_lower);
  rep.plan.eps2 = eps2;
  rep.plan.eps3 = eps3;
  rep.plan.thetas = compute_sample_sizes(eps1, eps2, eps3, delta, b, n, rep.plan.opt_lower);
  rep.plan.validate();

  std::uint64_t theta =
      std::max({rep.plan.thetas.theta1, rep.plan.thetas.theta2, rep.plan.thetas.theta3});
  if (theta_cap > 0 && theta > theta_cap) {
    theta = theta_cap;
    rep.cap_applied = true;
  }
  rep.theta_used = theta;

  RRCollection coll = generate_collection(model, theta, derive_seed(master_seed, 2), threads);
  RisObjective f(coll, params, cost_model, b);

  MarketingVector zero = MarketingVector::Zero(b.size());
  rep.condition_a = f.value(zero) + f.value(b);
  rep.pruned = iterative_pruning(f, b);
  rep.condition_b = f.value(rep.pruned.lower) + f.value(rep.pruned.upper);

  Rng dg_rng(derive_seed(master_seed, 3));
  rep.chosen_x = double_greedy(f, rep.pruned, dg_rng);
  rep.objective_estimate = f.value(rep.chosen_x);
  rep.guarantee_holds = rep.condition_b >= 0.0 && !rep.cap_applied;
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

MarketingVector baseline(BaselineKind kind, LatticeObjective& objective, const Bounds& b,
                         Rng& rng) {
  validate_bounds(b);
  if (kind == BaselineKind::Greedy) return greedy_ascent(objective, b);
  const int d = static_cast<int>(b.size());
  MarketingVector x = MarketingVector::Zero(d);
  for (;;) {
    std::vector<int> open;
    for (int i = 0; i < d; ++i)
      if (x(i) < b(i)) open.push_back(i);
    if (open.empty()) break;
    int i = open[rng.uniform_int(static_cast<std::uint32_t>(open.size()))];
    if (objective.marginal(x, i, +1) <= 0.0) break;
    ++x(i);
  }
  return x;
}

}  // namespace cpm
