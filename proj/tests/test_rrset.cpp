#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cpm/rrset.hpp"
#include "test_util.hpp"

using namespace cpm;
using cpm::test::make_graph;
using cpm::test::uniform_model;
using cpm::test::vec;

namespace {

StrategyParams flat_params(int n, double r, double eta = 0.8) {
  StrategyParams p;
  p.eta = eta;
  p.r = Eigen::MatrixXd::Constant(n, 1, r);
  return p;
}

}  // namespace

TEST_CASE("RR-set on an arcless graph is the root alone") {
  Graph g = make_graph(3, {});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.5);
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    RRSet s = generate_rr_set(m, rng);
    CHECK(s.nodes == std::vector<int>{s.root});
  }
}

TEST_CASE("RR-set with p=1 on a DAG is the ancestor closure") {
  Graph g = make_graph(4, {{0, 1}, {1, 2}, {0, 3}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 1.0);
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    RRSet s = generate_rr_set(m, rng);
    if (s.root == 2) CHECK(s.nodes == std::vector<int>{0, 1, 2});
    if (s.root == 3) CHECK(s.nodes == std::vector<int>{0, 3});
    if (s.root == 0) CHECK(s.nodes == std::vector<int>{0});
  }
}

TEST_CASE("LT RR-set membership frequency matches the arc weight") {
  Graph g = make_graph(2, {{0, 1}});
  TriggeringModel m = uniform_model(g, ModelKind::LT, 0.3);
  Rng rng(3);
  const int draws = 100000;
  int rooted_at_1 = 0, contains_0 = 0;
  for (int t = 0; t < draws; ++t) {
    RRSet s = generate_rr_set(m, rng);
    if (s.root == 1) {
      ++rooted_at_1;
      if (s.nodes.size() == 2) ++contains_0;
    }
  }
  double freq = static_cast<double>(contains_0) / rooted_at_1;
  CHECK(std::abs(freq - 0.3) <= 4 * std::sqrt(0.3 * 0.7 / rooted_at_1));
}

TEST_CASE("LT RR-sets form a reverse path") {
  // every visited node picks at most one live in-arc, so |R| - 1 picks total
  Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}, {1, 3}});
  TriggeringModel m = assign_weighted_cascade(g, ModelKind::LT);
  Rng rng(4);
  for (int t = 0; t < 10000; ++t) {
    RRSet s = generate_rr_set(m, rng);
    CHECK(s.nodes.size() <= 5);
    CHECK(std::binary_search(s.nodes.begin(), s.nodes.end(), s.root));
  }
}

TEST_CASE("coverage probability") {
  StrategyParams p = flat_params(3, 0.257, 0.8);
  p.eta = 0.8;
  RRSet s;
  s.root = 0;
  s.nodes = {0, 1};
  CHECK(coverage_probability(s, p, vec({0})) == 0.0);
  RRSet single;
  single.root = 2;
  single.nodes = {2};
  CHECK(coverage_probability(single, p, vec({1})) == doctest::Approx(0.257));
  CHECK(coverage_probability(s, p, vec({1})) == doctest::Approx(1 - 0.743 * 0.743).epsilon(1e-6));
}

TEST_CASE("estimate_f_hat hand-built collection") {
  // n=4, theta=2, p values {0.5, 0.25}, c(x)=0.3 -> (4/2)(0.75) - 0.3 = 1.2
  StrategyParams p;
  p.eta = 0.8;
  p.r.resize(4, 1);
  p.r << 0.5, 0.25, 0.0, 0.0;
  RRCollection coll;
  coll.node_count = 4;
  coll.sets.resize(2);
  coll.sets[0].root = 0;
  coll.sets[0].nodes = {0};
  coll.sets[1].root = 1;
  coll.sets[1].nodes = {1};
  coll.build_membership();
  CostModel cm;
  cm.unit_costs = Eigen::VectorXd::Constant(1, 0.3);
  CHECK(estimate_f_hat(coll, p, cm, vec({1})) == doctest::Approx(1.2));
  CHECK(estimate_f_hat(coll, p, cm, vec({0})) == 0.0);
}

TEST_CASE("collection round trip through text serialization") {
  Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.6);
  RRCollection coll = generate_collection(m, 200, 5);
  std::ostringstream out;
  write_collection(out, coll);
  std::istringstream in(out.str());
  RRCollection back = read_collection(in, 5);
  REQUIRE(back.theta() == coll.theta());
  for (std::size_t i = 0; i < coll.sets.size(); ++i) {
    CHECK(back.sets[i].root == coll.sets[i].root);
    CHECK(back.sets[i].nodes == coll.sets[i].nodes);
  }
}

TEST_CASE("generate_collection independent of thread count") {
  Graph g = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.5);
  RRCollection a = generate_collection(m, 500, 7, 1);
  RRCollection b = generate_collection(m, 500, 7, 4);
  REQUIRE(a.theta() == b.theta());
  for (std::size_t i = 0; i < a.sets.size(); ++i) CHECK(a.sets[i].nodes == b.sets[i].nodes);
}

TEST_CASE("CoverageState marginals match scratch recomputation") {
  Graph g = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0},
                           {0, 4}, {2, 6}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.5);
  Rng prng(8);
  StrategyParams p = sample_random_strategy_params(8, 2, {{0.0, 0.8}, {0.0, 0.8}}, 0.8, prng);
  Bounds b = vec({3, 3});
  CostModel cm = CostModel::uniform(0.8, 8, b);
  RRCollection coll = generate_collection(m, 300, 9);
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    MarketingVector x(2);
    for (int i = 0; i < 2; ++i)
      x(i) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(b(i) + 1)));
    CoverageState state(coll, p, cm, b, x);
    CHECK(state.f_hat() == doctest::Approx(estimate_f_hat(coll, p, cm, x)).epsilon(1e-9));
    for (int i = 0; i < 2; ++i)
      for (int dir : {+1, -1}) {
        if (x(i) + dir < 0 || x(i) + dir > b(i)) continue;
        MarketingVector y = x;
        y(i) += dir;
        double scratch = estimate_f_hat(coll, p, cm, y) - estimate_f_hat(coll, p, cm, x);
        CHECK(state.marginal_gain(i, dir) ==
              doctest::Approx(scratch).epsilon(1e-9).scale(1.0));
      }
  }
}

TEST_CASE("CoverageState rejects out-of-bounds moves") {
  Graph g = make_graph(3, {{0, 1}, {1, 2}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.5);
  StrategyParams p = flat_params(3, 0.4);
  Bounds b = vec({2});
  CostModel cm = CostModel::uniform(1.0, 3, b);
  RRCollection coll = generate_collection(m, 50, 11);
  CoverageState at_top(coll, p, cm, b, vec({2}));
  CHECK_THROWS_AS(at_top.marginal_gain(0, +1), std::out_of_range);
  CoverageState at_zero(coll, p, cm, b, vec({0}));
  CHECK_THROWS_AS(at_zero.commit(0, -1), std::out_of_range);
}

TEST_CASE("fixed-collection f_hat is dr-submodular") {
  Graph g = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.5);
  Rng prng(12);
  StrategyParams p = sample_random_strategy_params(8, 2, {{0.0, 0.6}, {0.0, 0.6}}, 0.8, prng);
  Bounds b = vec({3, 3});
  CostModel cm = CostModel::uniform(1.0, 8, b);
  RRCollection coll = generate_collection(m, 300, 13);
  Rng rng(14);
  for (int t = 0; t < 1000; ++t) {
    MarketingVector y(2), x(2);
    int i = static_cast<int>(rng.uniform_int(2));
    for (int k = 0; k < 2; ++k) {
      int cap = b(k) - (k == i ? 1 : 0);
      y(k) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(cap + 1)));
      x(k) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(y(k) + 1)));
    }
    MarketingVector xi = x, yi = y;
    ++xi(i), ++yi(i);
    double gx = estimate_f_hat(coll, p, cm, xi) - estimate_f_hat(coll, p, cm, x);
    double gy = estimate_f_hat(coll, p, cm, yi) - estimate_f_hat(coll, p, cm, y);
    CHECK(gx >= gy - 1e-9);
  }
}
