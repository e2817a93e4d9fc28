#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpm/optimizer.hpp"
#include "cpm/oracle.hpp"
#include "test_util.hpp"

using namespace cpm;
using cpm::test::make_graph;
using cpm::test::ModularObjective;
using cpm::test::uniform_model;
using cpm::test::vec;

namespace {

struct RisFixture {
  Graph graph;
  TriggeringModel model;
  StrategyParams params;
  Bounds bounds;
  CostModel cost_model;
  RRCollection coll;

  explicit RisFixture(double lambda, std::uint64_t seed = 21, std::uint64_t theta = 400) {
    graph = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0},
                           {1, 5}, {3, 7}});
    model = uniform_model(graph, ModelKind::IC, 0.5);
    Rng prng(seed);
    params = sample_random_strategy_params(8, 2, {{0.1, 0.6}, {0.1, 0.6}}, 0.8, prng);
    bounds = vec({3, 3});
    cost_model = CostModel::uniform(lambda, 8, bounds);
    coll = generate_collection(model, theta, seed + 1);
  }
};

}  // namespace

TEST_CASE("double greedy on modular objectives is deterministic") {
  ModularObjective up({1.0, 2.0, 0.5});
  Box box{vec({0, 0, 0}), vec({3, 2, 4})};
  Rng rng(1);
  CHECK(double_greedy(up, box, rng) == box.upper);
  ModularObjective down({-1.0, -2.0, -0.5});
  CHECK(double_greedy(down, box, rng) == box.lower);
}

TEST_CASE("double greedy output stays inside the box") {
  RisFixture fx(1.0);
  RisObjective f(fx.coll, fx.params, fx.cost_model, fx.bounds);
  Box box{vec({0, 0}), fx.bounds};
  for (int t = 0; t < 1000; ++t) {
    Rng rng(100 + t);
    MarketingVector x = double_greedy(f, box, rng);
    CHECK(lattice_leq(box.lower, x));
    CHECK(lattice_leq(x, box.upper));
  }
}

TEST_CASE("double greedy rejects an invalid box") {
  ModularObjective f({1.0});
  Box bad{vec({2}), vec({1})};
  Rng rng(2);
  CHECK_THROWS_AS(double_greedy(f, bad, rng), std::invalid_argument);
}

TEST_CASE("iterative pruning collapses modular objectives") {
  ModularObjective up({1.0, 2.0});
  Box grown = iterative_pruning(up, vec({3, 4}));
  CHECK(grown.lower == vec({3, 4}));
  CHECK(grown.upper == vec({3, 4}));
  ModularObjective down({-1.0, -2.0});
  Box shrunk = iterative_pruning(down, vec({3, 4}));
  CHECK(shrunk.lower == vec({0, 0}));
  CHECK(shrunk.upper == vec({0, 0}));
}

TEST_CASE("binary-search k-scan matches the linear scan") {
  for (double lambda : {0.5, 1.0, 1.6}) {
    RisFixture fx(lambda);
    RisObjective f1(fx.coll, fx.params, fx.cost_model, fx.bounds);
    Box linear = iterative_pruning(f1, fx.bounds, nullptr, false);
    RisObjective f2(fx.coll, fx.params, fx.cost_model, fx.bounds);
    Box bisect = iterative_pruning(f2, fx.bounds, nullptr, true);
    CHECK(linear.lower == bisect.lower);
    CHECK(linear.upper == bisect.upper);
  }
}

TEST_CASE("pruning trace is nested and monotone") {
  RisFixture fx(1.2);
  RisObjective f(fx.coll, fx.params, fx.cost_model, fx.bounds);
  PruneTrace trace;
  iterative_pruning(f, fx.bounds, &trace);
  REQUIRE(trace.g_seq.size() == trace.h_seq.size());
  for (std::size_t t = 1; t < trace.g_seq.size(); ++t) {
    CHECK(lattice_leq(trace.g_seq[t - 1], trace.g_seq[t]));
    CHECK(lattice_leq(trace.g_seq[t], trace.h_seq[t]));
    CHECK(lattice_leq(trace.h_seq[t], trace.h_seq[t - 1]));
  }
}

TEST_CASE("greedy ascent and baselines on modular objectives") {
  ModularObjective up({1.0, 2.0});
  CHECK(greedy_ascent(up, vec({2, 3})) == vec({2, 3}));
  ModularObjective down({-1.0, -2.0});
  CHECK(greedy_ascent(down, vec({2, 3})) == vec({0, 0}));
  Rng rng(5);
  CHECK(baseline(BaselineKind::Greedy, up, vec({2, 3}), rng) == vec({2, 3}));
  CHECK(baseline(BaselineKind::Random, up, vec({2, 3}), rng) == vec({2, 3}));
  CHECK(baseline(BaselineKind::Random, down, vec({2, 3}), rng) == vec({0, 0}));
}

TEST_CASE("greedy ascent breaks ties toward the lowest index") {
  ModularObjective f({1.0, 1.0});
  // both components tie at every step; trace is fully determined
  MarketingVector x = greedy_ascent(f, vec({1, 1}));
  CHECK(x == vec({1, 1}));
}

TEST_CASE("opt_estimation matches its defining formula") {
  RisFixture fx(0.3);
  RisObjective f(fx.coll, fx.params, fx.cost_model, fx.bounds);
  MarketingVector reached;
  double lb = opt_estimation(f, fx.bounds, 0.1, &reached);
  CHECK(lb == doctest::Approx(estimate_f_hat(fx.coll, fx.params, fx.cost_model, reached) - 0.2));
  CHECK(lb > 0.0);
}

TEST_CASE("opt_estimation errors when nothing is profitable") {
  RisFixture fx(1e6);
  RisObjective f(fx.coll, fx.params, fx.cost_model, fx.bounds);
  CHECK_THROWS_AS(opt_estimation(f, fx.bounds, 0.1), OptLowerBoundError);
}

TEST_CASE("theta1 worked example: n=100, b=(2,2), delta=10, eps1=0.1") {
  CHECK(theta1_count(0.1, 10.0, vec({2, 2}), 100) == 1674);
}

TEST_CASE("theta2/theta3 decrease as the lower bound grows") {
  Bounds b = vec({2, 2});
  SampleSizes lo = compute_sample_sizes(0.1, 0.1, 0.1, 10.0, b, 100, 5.0);
  SampleSizes hi = compute_sample_sizes(0.1, 0.1, 0.1, 10.0, b, 100, 20.0);
  CHECK(lo.theta1 == hi.theta1);
  CHECK(hi.theta2 < lo.theta2);
  CHECK(hi.theta3 < lo.theta3);
}

TEST_CASE("sampling plan enforces the epsilon split") {
  SamplingPlan plan;
  plan.eps = 0.15;
  plan.eps1 = 0.1;
  plan.eps2 = 0.1;
  plan.eps3 = 0.1;
  plan.delta = 10.0;
  plan.opt_lower = 1.0;
  CHECK_NOTHROW(plan.validate());
  plan.eps3 = 0.2;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}

TEST_CASE("choose_eps_split beats the naive split") {
  Bounds b = vec({2, 2});
  auto [e2, e3] = choose_eps_split(0.15, 0.1, 10.0, b, 100, 3.0);
  CHECK(e2 + e3 / 2 == doctest::Approx(0.15).epsilon(1e-12));
  SampleSizes best = compute_sample_sizes(0.1, e2, e3, 10.0, b, 100, 3.0);
  SampleSizes naive = compute_sample_sizes(0.1, 0.075, 0.15, 10.0, b, 100, 3.0);
  CHECK(std::max(best.theta2, best.theta3) <= std::max(naive.theta2, naive.theta3));
}

TEST_CASE("dg_ip_ris is deterministic under a fixed seed") {
  RisFixture fx(0.5);
  RunReport a = dg_ip_ris(fx.graph, fx.model, fx.params, fx.cost_model, fx.bounds, 0.15, 0.1,
                          10.0, 99, 20000);
  RunReport b = dg_ip_ris(fx.graph, fx.model, fx.params, fx.cost_model, fx.bounds, 0.15, 0.1,
                          10.0, 99, 20000);
  CHECK(a.chosen_x == b.chosen_x);
  CHECK(a.objective_estimate == b.objective_estimate);
  CHECK(a.condition_a == b.condition_a);
  CHECK(a.condition_b == b.condition_b);
  CHECK(a.theta_used == b.theta_used);
}

TEST_CASE("dg_ip_ris condition B dominates condition A") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    RisFixture fx(0.8, 30 + seed);
    RunReport rep = dg_ip_ris(fx.graph, fx.model, fx.params, fx.cost_model, fx.bounds, 0.15,
                              0.1, 10.0, seed, 20000);
    CHECK(rep.condition_b >= rep.condition_a - 1e-9);
    CHECK(lattice_leq(rep.pruned.lower, rep.chosen_x));
    CHECK(lattice_leq(rep.chosen_x, rep.pruned.upper));
  }
}

TEST_CASE("dg_ip_ris monotone case: zero cost picks the bounds") {
  Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.5);
  StrategyParams p;
  p.eta = 0.8;
  p.r = Eigen::MatrixXd::Constant(4, 1, 0.5);
  Bounds b = vec({2});
  CostModel cm = CostModel::uniform(0.0, 4, b);
  RunReport rep = dg_ip_ris(g, m, p, cm, b, 0.15, 0.1, 10.0, 17, 20000);
  CHECK(rep.chosen_x == b);
}

TEST_CASE("theta cap voids the guarantee") {
  RisFixture fx(0.5);
  RunReport rep = dg_ip_ris(fx.graph, fx.model, fx.params, fx.cost_model, fx.bounds, 0.15,
                            0.1, 10.0, 7, 50);
  CHECK(rep.cap_applied);
  CHECK(rep.theta_used == 50);
  CHECK_FALSE(rep.guarantee_holds);
}
