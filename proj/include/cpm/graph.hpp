#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpm/rng.hpp"

namespace cpm {

struct Graph {
  int node_count = 0;
  std::int64_t arc_count = 0;
  std::vector<std::vector<int>> out_neighbors;
  std::vector<std::vector<int>> in_neighbors;

  int in_degree(int v) const { return static_cast<int>(in_neighbors[v].size()); }
  int out_degree(int v) const { return static_cast<int>(out_neighbors[v].size()); }
};

struct IngestReport {
  std::int64_t input_lines = 0;
  std::int64_t self_loops_dropped = 0;
  std::int64_t duplicate_arcs_dropped = 0;
  std::vector<std::int64_t> original_ids;  // dense id -> original id

  void print(std::ostream& os) const;
};

struct LoadResult {
  Graph graph;
  IngestReport report;
};

// Edge-list text format: "u v" per line, '#' comments. Node ids are remapped
// to dense [0,n). Self-loops are dropped, parallel arcs collapsed (first
// wins); both counted in the report. With `undirected`, each input edge
// yields two arcs.
LoadResult load_edge_list(const std::string& path, bool undirected);
LoadResult load_edge_list(std::istream& in, bool undirected);

void write_edge_list(std::ostream& os, const Graph& g);

enum class ModelKind { IC, LT };

// Per-arc parameters are aligned with in_neighbors: in_prob[v][k] belongs to
// arc (in_neighbors[v][k], v). Under IC this is p_uv, under LT the weight
// b_uv. Arcs whose source id is >= bernoulli_source_min are sampled as
// independent Bernoulli draws even under LT (used by the constructed graph,
// where pseudo-seed arcs carry per-node seeding probabilities).
struct TriggeringModel {
  const Graph* graph = nullptr;
  ModelKind kind = ModelKind::IC;
  std::vector<std::vector<double>> in_prob;
  int bernoulli_source_min = 0;  // set to graph->node_count for plain models

  void validate() const;  // throws std::invalid_argument on bad parameters
};

// Weighted-cascade parameterization: every arc into v gets 1/|N^-(v)|.
TriggeringModel assign_weighted_cascade(const Graph& graph, ModelKind kind);

// One sampled triggering set per node; equivalently a live-arc subgraph.
struct Realization {
  std::vector<std::vector<int>> triggering_sets;
};

Realization sample_realization(const TriggeringModel& model, Rng& rng);

double realization_probability(const TriggeringModel& model, const Realization& g);

}  // namespace cpm
