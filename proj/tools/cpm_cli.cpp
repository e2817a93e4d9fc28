#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cpm/acceptance.hpp"
#include "cpm/config.hpp"
#include "cpm/experiment.hpp"
#include "cpm/optimizer.hpp"
#include "cpm/oracle.hpp"
#include "cpm/rrset.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "key=value config file");
  cmd->add_option("-s,--set", opts.overrides, "config override key=value (repeatable)");
}

cpm::RunConfig resolve_config(const CommonOpts& opts) {
  cpm::RunConfig cfg;
  if (!opts.config_path.empty()) cfg = cpm::load_config(opts.config_path);
  for (const auto& o : opts.overrides) cpm::apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const cpm::RunConfig& cfg, const std::string& name) {
  std::string path = cfg.outdir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  std::cerr << "writing " << path << "\n";
  return out;
}

std::string fmt_x(const cpm::MarketingVector& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << x(i);
  os << ")";
  return os.str();
}

int run_ingest(const cpm::RunConfig& cfg, const std::string& out_path) {
  cpm::LoadResult res = cpm::load_edge_list(cfg.dataset, cfg.undirected);
  res.report.print(std::cout);
  std::cout << "arcs=" << res.graph.arc_count << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    cpm::write_edge_list(out, res.graph);
  }
  return 0;
}

int run_optimize(const cpm::RunConfig& cfg) {
  cpm::ExperimentContext ctx = cpm::build_context(cfg);
  auto rows = cpm::cmd_optimize(ctx);
  std::ofstream out = open_out(cfg, "optimize.csv");
  cpm::write_optimize_csv(out, rows);
  cpm::write_optimize_csv(std::cout, rows);
  return 0;
}

int run_prune(const cpm::RunConfig& cfg, std::uint64_t theta) {
  cpm::ExperimentContext ctx = cpm::build_context(cfg);
  if (theta == 0) theta = cfg.theta_cap ? cfg.theta_cap : 10000;
  cpm::RRCollection coll =
      cpm::generate_collection(ctx.model, theta, cpm::derive_seed(cfg.seed, 500), cfg.threads);
  for (double lambda : cfg.lambdas) {
    cpm::CostModel cm = cpm::CostModel::uniform(lambda, ctx.graph.node_count, ctx.bounds);
    cpm::RisObjective f(coll, ctx.params, cm, ctx.bounds);
    cpm::PruneTrace trace;
    cpm::Box box = cpm::iterative_pruning(f, ctx.bounds, &trace);
    std::cout << "lambda=" << lambda << " iterations=" << trace.g_seq.size() - 1
              << " g=" << fmt_x(box.lower) << " h=" << fmt_x(box.upper) << "\n";
    for (std::size_t t = 0; t < trace.g_seq.size(); ++t)
      std::cout << "  t=" << t << " g_t=" << fmt_x(trace.g_seq[t])
                << " h_t=" << fmt_x(trace.h_seq[t]) << "\n";
  }
  return 0;
}

int run_table_ab(const cpm::RunConfig& cfg, std::uint64_t theta) {
  cpm::ExperimentContext ctx = cpm::build_context(cfg);
  auto rows = cpm::cmd_table_ab(ctx, theta);
  std::ofstream out = open_out(cfg, "table_ab.csv");
  cpm::write_table_ab_csv(out, rows);
  cpm::write_table_ab_csv(std::cout, rows);
  return 0;
}

int run_bench(const cpm::RunConfig& cfg) {
  cpm::ExperimentContext ctx = cpm::build_context(cfg);
  auto rows = cpm::cmd_bench(ctx);
  std::ofstream out = open_out(cfg, "bench.csv");
  cpm::write_bench_csv(out, rows);
  cpm::write_bench_csv(std::cout, rows);
  return 0;
}

int run_oracle(const cpm::RunConfig& cfg) {
  cpm::ExperimentContext ctx = cpm::build_context(cfg);
  cpm::OracleInstance inst;
  inst.graph = std::move(ctx.graph);
  inst.model = ctx.model;
  inst.model.graph = &inst.graph;
  inst.params = ctx.params;
  inst.bounds = ctx.bounds;
  inst.cost = cpm::CostModel::uniform(cfg.lambdas.empty() ? 1.0 : cfg.lambdas.front(),
                                      inst.graph.node_count, inst.bounds);
  inst.validate_caps();
  cpm::OptResult opt = cpm::exact_opt(inst);
  std::cout << "exact_opt=" << opt.value << "\n";
  for (const auto& x : opt.maximizers) std::cout << "maximizer=" << fmt_x(x) << "\n";
  cpm::ExactProfitObjective f(inst);
  cpm::Rng rng(cpm::derive_seed(cfg.seed, 42));
  cpm::DrReport rep = cpm::check_dr_submodular(f, inst.bounds, 200, rng);
  std::cout << "dr_trials=" << rep.trials << "\n"
            << "dr_violations=" << rep.violations << "\n"
            << "negative_marginal_found=" << (rep.negative_marginal_found ? 1 : 0) << "\n";
  return rep.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous profit maximization over lattice marketing strategies"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string ingest_out;
  std::uint64_t theta = 0;

  CLI::App* ingest = app.add_subcommand("ingest", "load an edge list and print the report");
  add_common(ingest, opts);
  ingest->add_option("-o,--out", ingest_out, "write the remapped edge list here");

  CLI::App* optimize =
      app.add_subcommand("optimize", "run the algorithm sweep and emit optimize.csv");
  add_common(optimize, opts);

  CLI::App* prune = app.add_subcommand("prune", "show iterative pruning traces per lambda");
  add_common(prune, opts);
  prune->add_option("--theta", theta, "RR-collection size (default: cap or 10000)");

  CLI::App* table = app.add_subcommand("table-ab", "emit the A/B condition table");
  add_common(table, opts);
  table->add_option("--theta", theta, "RR-collection size (default: cap or 10000)");

  CLI::App* bench = app.add_subcommand("bench", "time MC vs sampling backends");
  add_common(bench, opts);

  CLI::App* verify = app.add_subcommand("verify", "run the oracle-backed acceptance suite");
  add_common(verify, opts);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force results on a desk-scale instance");
  add_common(oracle, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cpm::run_acceptance(std::cout) == 0 ? 0 : 1;
    cpm::RunConfig cfg = resolve_config(opts);
    if (ingest->parsed()) return run_ingest(cfg, ingest_out);
    if (optimize->parsed()) return run_optimize(cfg);
    if (prune->parsed()) return run_prune(cfg, theta);
    if (table->parsed()) return run_table_ab(cfg, theta);
    if (bench->parsed()) return run_bench(cfg);
    if (oracle->parsed()) return run_oracle(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
