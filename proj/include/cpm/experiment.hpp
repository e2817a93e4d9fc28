#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cpm/config.hpp"
#include "cpm/optimizer.hpp"
#include "cpm/strategy.hpp"

namespace cpm {

// Graph + model + strategy params assembled from a run config. The dataset
// field is either a path to an edge list or "synthetic:<n>:<arcs>" for a
// seeded random graph.
struct ExperimentContext {
  Graph graph;
  TriggeringModel model;  // weighted cascade, points at this->graph
  StrategyParams params;
  Bounds bounds;
  RunConfig config;

  ExperimentContext() = default;
  ExperimentContext(const ExperimentContext&) = delete;
  ExperimentContext& operator=(const ExperimentContext&) = delete;
  ExperimentContext(ExperimentContext&& o) noexcept { *this = std::move(o); }
  ExperimentContext& operator=(ExperimentContext&& o) noexcept {
    graph = std::move(o.graph);
    model = std::move(o.model);
    params = std::move(o.params);
    bounds = std::move(o.bounds);
    config = std::move(o.config);
    model.graph = &graph;
    return *this;
  }
};

ExperimentContext build_context(const RunConfig& cfg);

// Uniform random directed multigraph-free graph, seeded.
Graph random_graph(int n, std::int64_t arcs, std::uint64_t seed);

struct OptimizeRow {
  std::string dataset, model, algo;
  double lambda = 0.0;
  MarketingVector chosen_x;
  double profit = 0.0;       // re-evaluated by the common MC evaluator
  double profit_stderr = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  double condition_a = 0.0, condition_b = 0.0;
  bool has_conditions = false;
  bool guarantee = false;
  std::string error;

  static std::string csv_header();
  std::string csv_row() const;
};

// One row per (lambda, algorithm); per-run failures become rows with the
// error column set.
std::vector<OptimizeRow> cmd_optimize(const ExperimentContext& ctx);

struct TableAbRow {
  double lambda = 0.0;
  double a = 0.0, b = 0.0;
  bool b_nonneg = false;
};

std::vector<TableAbRow> cmd_table_ab(const ExperimentContext& ctx, std::uint64_t theta);

struct BenchRow {
  std::string algo, backend;
  double wall_time_s = 0.0;
  double speedup = 0.0;  // mc time / sampling time, on the sampling row
};

std::vector<BenchRow> cmd_bench(const ExperimentContext& ctx);

void write_optimize_csv(std::ostream& os, const std::vector<OptimizeRow>& rows);
void write_table_ab_csv(std::ostream& os, const std::vector<TableAbRow>& rows);
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace cpm
