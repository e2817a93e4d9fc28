#include "cpm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "cpm/diffusion.hpp"
#include "cpm/rrset.hpp"

namespace cpm {

Graph random_graph(int n, std::int64_t arcs, std::uint64_t seed) {
  if (n < 2 || arcs < 1) throw std::invalid_argument("random_graph: need n >= 2, arcs >= 1");
  if (arcs > static_cast<std::int64_t>(n) * (n - 1))
    throw std::invalid_argument("random_graph: too many arcs");
  Graph g;
  g.node_count = n;
  g.out_neighbors.resize(n);
  g.in_neighbors.resize(n);
  Rng rng(seed);
  std::unordered_set<std::int64_t> seen;
  while (g.arc_count < arcs) {
    int u = static_cast<int>(rng.uniform_int(n));
    int v = static_cast<int>(rng.uniform_int(n));
    if (u == v) continue;
    std::int64_t key = static_cast<std::int64_t>(u) * n + v;
    if (!seen.insert(key).second) continue;
    g.out_neighbors[u].push_back(v);
    g.in_neighbors[v].push_back(u);
    ++g.arc_count;
  }
  for (auto& nb : g.out_neighbors) std::sort(nb.begin(), nb.end());
  for (auto& nb : g.in_neighbors) std::sort(nb.begin(), nb.end());
  return g;
}

ExperimentContext build_context(const RunConfig& cfg) {
  cfg.validate();
  ExperimentContext ctx;
  ctx.config = cfg;
  if (cfg.dataset.rfind("synthetic:", 0) == 0) {
    std::istringstream is(cfg.dataset.substr(10));
    int n;
    std::int64_t m;
    char sep;
    if (!(is >> n >> sep >> m) || sep != ':')
      throw std::invalid_argument("dataset must be a path or synthetic:<n>:<arcs>");
    ctx.graph = random_graph(n, m, derive_seed(cfg.seed, 100));
  } else {
    ctx.graph = load_edge_list(cfg.dataset, cfg.undirected).graph;
  }
  ctx.model = assign_weighted_cascade(ctx.graph, cfg.model);
  ctx.model.graph = &ctx.graph;
  Rng prng(derive_seed(cfg.seed, 101));
  ctx.params = sample_random_strategy_params(ctx.graph.node_count, cfg.d, cfg.r_ranges,
                                             cfg.eta, prng);
  ctx.bounds = Eigen::Map<const Eigen::VectorXi>(cfg.bounds.data(), cfg.bounds.size());
  return ctx;
}

namespace {

std::string vec_str(const MarketingVector& x) {
  std::ostringstream os;
  for (int i = 0; i < x.size(); ++i) os << (i ? ";" : "") << x(i);
  return os.str();
}

struct AlgoOutcome {
  MarketingVector x;
  double wall_time_s = 0.0;
  double condition_a = 0.0, condition_b = 0.0;
  bool has_conditions = false;
  bool guarantee = false;
};

// Collection sized by the full sampling plan (theta_1 -> OPT_lb -> theta),
// shared by the sampling-backed algorithm variants.
RRCollection plan_collection(const ExperimentContext& ctx, const CostModel& cost_model,
                             std::uint64_t seed, std::uint64_t* theta_out = nullptr) {
  const RunConfig& cfg = ctx.config;
  const int n = ctx.graph.node_count;
  std::uint64_t theta1 = theta1_count(cfg.eps1, cfg.delta, ctx.bounds, n);
  if (cfg.theta_cap > 0) theta1 = std::min(theta1, cfg.theta_cap);
  RRCollection coll1 = generate_collection(ctx.model, theta1, derive_seed(seed, 1), cfg.threads);
  RisObjective f1(coll1, ctx.params, cost_model, ctx.bounds);
  double opt_lower = opt_estimation(f1, ctx.bounds, cfg.eps1);
  auto [e2, e3] = choose_eps_split(cfg.eps, cfg.eps1, cfg.delta, ctx.bounds, n, opt_lower);
  SampleSizes sizes = compute_sample_sizes(cfg.eps1, e2, e3, cfg.delta, ctx.bounds, n, opt_lower);
  std::uint64_t theta = std::max({sizes.theta1, sizes.theta2, sizes.theta3});
  if (cfg.theta_cap > 0) theta = std::min(theta, cfg.theta_cap);
  if (theta_out) *theta_out = theta;
  return generate_collection(ctx.model, theta, derive_seed(seed, 2), cfg.threads);
}

AlgoOutcome run_algorithm(const std::string& algo, const ExperimentContext& ctx,
                          const CostModel& cost_model, std::uint64_t run_seed) {
  const RunConfig& cfg = ctx.config;
  auto t0 = std::chrono::steady_clock::now();
  AlgoOutcome out;
  MarketingVector zero = MarketingVector::Zero(ctx.bounds.size());
  Box full{zero, ctx.bounds};

  if (algo == "DG" || algo == "DGIT" || algo == "Greedy" || algo == "Random") {
    McProfitObjective f(ctx.graph, ctx.model, ctx.params, cost_model, cfg.mc_samples,
                        derive_seed(run_seed, 10), cfg.threads);
    Rng rng(derive_seed(run_seed, 11));
    if (algo == "DG") {
      out.x = double_greedy(f, full, rng);
    } else if (algo == "DGIT") {
      Box pruned = iterative_pruning(f, ctx.bounds);
      out.condition_a = f.value(zero) + f.value(ctx.bounds);
      out.condition_b = f.value(pruned.lower) + f.value(pruned.upper);
      out.has_conditions = true;
      out.guarantee = out.condition_b >= 0.0;
      out.x = double_greedy(f, pruned, rng);
    } else if (algo == "Greedy") {
      out.x = baseline(BaselineKind::Greedy, f, ctx.bounds, rng);
    } else {
      out.x = baseline(BaselineKind::Random, f, ctx.bounds, rng);
    }
  } else if (algo == "DGITS") {
    RunReport rep = dg_ip_ris(ctx.graph, ctx.model, ctx.params, cost_model, ctx.bounds,
                              cfg.eps, cfg.eps1, cfg.delta, run_seed, cfg.theta_cap,
                              cfg.threads);
    out.x = rep.chosen_x;
    out.condition_a = rep.condition_a;
    out.condition_b = rep.condition_b;
    out.has_conditions = true;
    out.guarantee = rep.guarantee_holds;
  } else if (algo == "DGS" || algo == "GreedyS") {
    RRCollection coll = plan_collection(ctx, cost_model, run_seed);
    RisObjective f(coll, ctx.params, cost_model, ctx.bounds);
    Rng rng(derive_seed(run_seed, 11));
    out.x = algo == "DGS" ? double_greedy(f, full, rng)
                          : baseline(BaselineKind::Greedy, f, ctx.bounds, rng);
  } else {
    throw std::invalid_argument("unknown algorithm " + algo);
  }
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

std::string OptimizeRow::csv_header() {
  return "dataset,model,lambda,algo,chosen_x,profit,profit_stderr,wall_time_s,seed,"
         "condition_a,condition_b,guarantee,error";
}

std::string OptimizeRow::csv_row() const {
  std::ostringstream os;
  os.precision(12);
  os << dataset << "," << model << "," << lambda << "," << algo << "," << vec_str(chosen_x)
     << "," << profit << "," << profit_stderr << "," << wall_time_s << "," << seed << ",";
  if (has_conditions)
    os << condition_a << "," << condition_b;
  else
    os << ",";
  os << "," << (guarantee ? 1 : 0) << "," << error;
  return os.str();
}

std::vector<OptimizeRow> cmd_optimize(const ExperimentContext& ctx) {
  const RunConfig& cfg = ctx.config;
  std::vector<OptimizeRow> rows;
  std::uint64_t run_index = 0;
  for (double lambda : cfg.lambdas) {
    CostModel cost_model = CostModel::uniform(lambda, ctx.graph.node_count, ctx.bounds);
    for (const std::string& algo : cfg.algos) {
      OptimizeRow row;
      row.dataset = cfg.dataset;
      row.model = cfg.model == ModelKind::IC ? "ic" : "lt";
      row.lambda = lambda;
      row.algo = algo;
      row.seed = derive_seed(cfg.seed, 1000 + run_index++);
      try {
        AlgoOutcome out = run_algorithm(algo, ctx, cost_model, row.seed);
        row.chosen_x = out.x;
        row.wall_time_s = out.wall_time_s;
        row.condition_a = out.condition_a;
        row.condition_b = out.condition_b;
        row.has_conditions = out.has_conditions;
        row.guarantee = out.guarantee;
        // common evaluator: every algorithm's pick re-scored by one MC
        // estimator with its own seed
        SpreadEstimate eval =
            estimate_profit_mc(ctx.graph, ctx.model, ctx.params, cost_model, out.x,
                               cfg.eval_samples, derive_seed(cfg.seed, 999), cfg.threads);
        row.profit = eval.mean;
        row.profit_stderr = eval.std_error;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<TableAbRow> cmd_table_ab(const ExperimentContext& ctx, std::uint64_t theta) {
  const RunConfig& cfg = ctx.config;
  if (theta == 0) theta = cfg.theta_cap > 0 ? cfg.theta_cap : 10000;
  RRCollection coll =
      generate_collection(ctx.model, theta, derive_seed(cfg.seed, 500), cfg.threads);
  MarketingVector zero = MarketingVector::Zero(ctx.bounds.size());
  std::vector<TableAbRow> rows;
  for (double lambda : cfg.lambdas) {
    CostModel cost_model = CostModel::uniform(lambda, ctx.graph.node_count, ctx.bounds);
    RisObjective f(coll, ctx.params, cost_model, ctx.bounds);
    TableAbRow row;
    row.lambda = lambda;
    row.a = f.value(zero) + f.value(ctx.bounds);
    Box pruned = iterative_pruning(f, ctx.bounds);
    row.b = f.value(pruned.lower) + f.value(pruned.upper);
    row.b_nonneg = row.b >= 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRow> cmd_bench(const ExperimentContext& ctx) {
  const RunConfig& cfg = ctx.config;
  double lambda = cfg.lambdas.empty() ? 1.0 : cfg.lambdas.front();
  CostModel cost_model = CostModel::uniform(lambda, ctx.graph.node_count, ctx.bounds);
  std::vector<BenchRow> rows;
  const std::pair<std::string, std::string> pairs[] = {
      {"DG", "DGS"}, {"DGIT", "DGITS"}, {"Greedy", "GreedyS"}};
  std::uint64_t run_index = 0;
  for (const auto& [mc_algo, s_algo] : pairs) {
    AlgoOutcome mc = run_algorithm(mc_algo, ctx, cost_model, derive_seed(cfg.seed, 2000 + run_index));
    AlgoOutcome sp = run_algorithm(s_algo, ctx, cost_model, derive_seed(cfg.seed, 2000 + run_index));
    ++run_index;
    rows.push_back({mc_algo, "mc", mc.wall_time_s, 0.0});
    rows.push_back({s_algo, "sampling", sp.wall_time_s,
                    sp.wall_time_s > 0.0 ? mc.wall_time_s / sp.wall_time_s : 0.0});
  }
  return rows;
}

void write_optimize_csv(std::ostream& os, const std::vector<OptimizeRow>& rows) {
  os << OptimizeRow::csv_header() << "\n";
  for (const auto& r : rows) os << r.csv_row() << "\n";
}

void write_table_ab_csv(std::ostream& os, const std::vector<TableAbRow>& rows) {
  os << "lambda,A,B,B_nonneg\n";
  os.precision(12);
  for (const auto& r : rows)
    os << r.lambda << "," << r.a << "," << r.b << "," << (r.b_nonneg ? 1 : 0) << "\n";
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "algo,backend,wall_time_s,speedup\n";
  os.precision(6);
  for (const auto& r : rows)
    os << r.algo << "," << r.backend << "," << r.wall_time_s << "," << r.speedup << "\n";
}

}  // namespace cpm
