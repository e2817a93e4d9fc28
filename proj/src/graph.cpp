#include "cpm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace cpm {

void IngestReport::print(std::ostream& os) const {
  os << "nodes=" << original_ids.size() << "\n"
     << "input_lines=" << input_lines << "\n"
     << "self_loops_dropped=" << self_loops_dropped << "\n"
     << "duplicate_arcs_dropped=" << duplicate_arcs_dropped << "\n";
}

LoadResult load_edge_list(const std::string& path, bool undirected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return load_edge_list(in, undirected);
}

LoadResult load_edge_list(std::istream& in, bool undirected) {
  LoadResult res;
  IngestReport& rep = res.report;

  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++rep.input_lines;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::int64_t u, v;
    if (!(ls >> u >> v) || u < 0 || v < 0) {
      throw std::runtime_error("malformed edge list line " + std::to_string(line_no) +
                               ": '" + line + "'");
    }
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw std::runtime_error("no edges in input");

  // remap to dense ids in first-seen order
  std::unordered_map<std::int64_t, int> id_map;
  auto dense = [&](std::int64_t orig) {
    auto it = id_map.find(orig);
    if (it != id_map.end()) return it->second;
    int id = static_cast<int>(rep.original_ids.size());
    id_map.emplace(orig, id);
    rep.original_ids.push_back(orig);
    return id;
  };

  std::vector<std::pair<int, int>> arcs;
  for (auto [u, v] : edges) {
    if (u == v) {
      ++rep.self_loops_dropped;
      continue;
    }
    int du = dense(u), dv = dense(v);
    arcs.emplace_back(du, dv);
    if (undirected) arcs.emplace_back(dv, du);
  }

  Graph& g = res.graph;
  g.node_count = static_cast<int>(rep.original_ids.size());
  if (g.node_count == 0) throw std::runtime_error("no edges in input");
  g.out_neighbors.resize(g.node_count);
  g.in_neighbors.resize(g.node_count);

  std::unordered_set<std::int64_t> seen;
  seen.reserve(arcs.size() * 2);
  for (auto [u, v] : arcs) {
    std::int64_t key = static_cast<std::int64_t>(u) * g.node_count + v;
    if (!seen.insert(key).second) {
      ++rep.duplicate_arcs_dropped;
      continue;
    }
    g.out_neighbors[u].push_back(v);
    g.in_neighbors[v].push_back(u);
    ++g.arc_count;
  }
  for (auto& nb : g.out_neighbors) std::sort(nb.begin(), nb.end());
  for (auto& nb : g.in_neighbors) std::sort(nb.begin(), nb.end());
  return res;
}

void write_edge_list(std::ostream& os, const Graph& g) {
  for (int u = 0; u < g.node_count; ++u)
    for (int v : g.out_neighbors[u]) os << u << " " << v << "\n";
}

void TriggeringModel::validate() const {
  if (!graph) throw std::invalid_argument("model has no graph");
  if (static_cast<int>(in_prob.size()) != graph->node_count)
    throw std::invalid_argument("in_prob size mismatch");
  for (int v = 0; v < graph->node_count; ++v) {
    if (in_prob[v].size() != graph->in_neighbors[v].size())
      throw std::invalid_argument("in_prob row size mismatch");
    double lt_sum = 0.0;
    for (std::size_t k = 0; k < in_prob[v].size(); ++k) {
      double p = in_prob[v][k];
      int src = graph->in_neighbors[v][k];
      bool bernoulli = kind == ModelKind::IC || src >= bernoulli_source_min;
      if (bernoulli) {
        if (!(p > 0.0 && p <= 1.0) && p != 0.0)
          throw std::invalid_argument("IC probability out of (0,1]");
      } else {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("LT weight out of [0,1]");
        lt_sum += p;
      }
    }
    if (kind == ModelKind::LT && lt_sum > 1.0 + 1e-9)
      throw std::invalid_argument("LT weights into node " + std::to_string(v) +
                                  " sum to " + std::to_string(lt_sum) + " > 1");
  }
}

TriggeringModel assign_weighted_cascade(const Graph& graph, ModelKind kind) {
  if (graph.node_count == 0) throw std::invalid_argument("empty graph");
  TriggeringModel m;
  m.graph = &graph;
  m.kind = kind;
  m.bernoulli_source_min = graph.node_count;
  m.in_prob.resize(graph.node_count);
  for (int v = 0; v < graph.node_count; ++v) {
    int deg = graph.in_degree(v);
    m.in_prob[v].assign(deg, deg > 0 ? 1.0 / deg : 0.0);
  }
  return m;
}

Realization sample_realization(const TriggeringModel& model, Rng& rng) {
  const Graph& g = *model.graph;
  Realization r;
  r.triggering_sets.resize(g.node_count);
  for (int v = 0; v < g.node_count; ++v) {
    const auto& in = g.in_neighbors[v];
    const auto& prob = model.in_prob[v];
    auto& tv = r.triggering_sets[v];
    if (model.kind == ModelKind::IC) {
      for (std::size_t k = 0; k < in.size(); ++k)
        if (rng.bernoulli(prob[k])) tv.push_back(in[k]);
    } else {
      // LT: at most one weighted in-neighbor; Bernoulli arcs independent
      double u = rng.uniform01();
      double acc = 0.0;
      int chosen = -1;
      for (std::size_t k = 0; k < in.size(); ++k) {
        if (in[k] >= model.bernoulli_source_min) continue;
        acc += prob[k];
        if (u < acc) {
          chosen = in[k];
          break;
        }
      }
      if (chosen >= 0) tv.push_back(chosen);
      for (std::size_t k = 0; k < in.size(); ++k)
        if (in[k] >= model.bernoulli_source_min && rng.bernoulli(prob[k]))
          tv.push_back(in[k]);
      std::sort(tv.begin(), tv.end());
    }
  }
  return r;
}

double realization_probability(const TriggeringModel& model, const Realization& g) {
  const Graph& graph = *model.graph;
  if (static_cast<int>(g.triggering_sets.size()) != graph.node_count)
    throw std::invalid_argument("realization size mismatch");
  double prob = 1.0;
  for (int v = 0; v < graph.node_count; ++v) {
    const auto& in = graph.in_neighbors[v];
    const auto& p = model.in_prob[v];
    const auto& tv = g.triggering_sets[v];
    auto in_tv = [&](int u) { return std::find(tv.begin(), tv.end(), u) != tv.end(); };
    if (model.kind == ModelKind::IC) {
      for (std::size_t k = 0; k < in.size(); ++k)
        prob *= in_tv(in[k]) ? p[k] : 1.0 - p[k];
    } else {
      int lt_chosen = -1;
      int lt_count = 0;
      double lt_sum = 0.0;
      double lt_chosen_prob = 0.0;
      for (std::size_t k = 0; k < in.size(); ++k) {
        int src = in[k];
        if (src >= model.bernoulli_source_min) {
          prob *= in_tv(src) ? p[k] : 1.0 - p[k];
          continue;
        }
        lt_sum += p[k];
        if (in_tv(src)) {
          ++lt_count;
          lt_chosen = src;
          lt_chosen_prob = p[k];
        }
      }
      if (lt_count > 1)
        throw std::invalid_argument("invalid LT realization: |T_v| > 1 at node " +
                                    std::to_string(v));
      prob *= lt_chosen >= 0 ? lt_chosen_prob : 1.0 - lt_sum;
    }
  }
  return prob;
}

}  // namespace cpm
