#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpm/oracle.hpp"
#include "test_util.hpp"

using namespace cpm;
using cpm::test::make_graph;
using cpm::test::uniform_model;
using cpm::test::vec;

namespace {

OracleInstance tiny(double lambda = 1.0) {
  OracleInstance inst;
  inst.graph = make_graph(2, {{0, 1}});
  inst.model = uniform_model(inst.graph, ModelKind::IC, 0.3);
  inst.params.eta = 0.8;
  inst.params.r.resize(2, 1);
  inst.params.r << 0.4, 0.2;
  inst.bounds = vec({2});
  inst.cost = CostModel::uniform(lambda, 2, inst.bounds);
  inst.validate_caps();
  return inst;
}

}  // namespace

TEST_CASE("exact_sigma basics") {
  Graph g = make_graph(2, {{0, 1}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 0.3);
  CHECK(exact_sigma(m, {}) == doctest::Approx(0.0));
  CHECK(exact_sigma(m, {0}) == doctest::Approx(1.3));
  TriggeringModel sure = uniform_model(g, ModelKind::IC, 1.0);
  CHECK(exact_sigma(sure, {0}) == doctest::Approx(2.0));
}

TEST_CASE("exact_sigma p=1 equals forward reachability") {
  Graph g = make_graph(5, {{0, 1}, {1, 2}, {0, 3}, {4, 0}});
  TriggeringModel m = uniform_model(g, ModelKind::IC, 1.0);
  CHECK(exact_sigma(m, {0}) == doctest::Approx(4.0));
  CHECK(exact_sigma(m, {4}) == doctest::Approx(5.0));
}

TEST_CASE("exact_profit single node closed form") {
  OracleInstance inst;
  inst.graph = make_graph(1, {});
  inst.model = uniform_model(inst.graph, ModelKind::IC, 0.5);
  inst.params.eta = 0.8;
  inst.params.r.resize(1, 1);
  inst.params.r << 0.5;
  inst.bounds = vec({1});
  inst.cost.unit_costs = Eigen::VectorXd::Constant(1, 0.1);
  inst.validate_caps();
  CHECK(exact_profit(inst, vec({0})) == doctest::Approx(0.0));
  CHECK(exact_profit(inst, vec({1})) == doctest::Approx(0.4));
}

TEST_CASE("exact_profit two-node closed form") {
  OracleInstance inst = tiny(0.0);
  MarketingVector x = vec({1});
  double h0 = seed_probability(inst.params, 0, x);
  double h1 = seed_probability(inst.params, 1, x);
  double p = 0.3;
  double mu = h0 * (1 - h1) * (1 + p) + (1 - h0) * h1 * 1.0 + h0 * h1 * 2.0;
  CHECK(exact_profit(inst, x) == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("exact_mu and exact_profit differ by the cost") {
  OracleInstance inst = tiny(1.3);
  MarketingVector x = vec({2});
  CHECK(exact_profit(inst, x) ==
        doctest::Approx(exact_mu(inst, x) - cost(inst.cost, x)).epsilon(1e-12));
}

TEST_CASE("exact_opt bracket cases") {
  OracleInstance free_inst = tiny(0.0);
  OptResult free_opt = exact_opt(free_inst);
  bool has_b = false;
  for (const auto& x : free_opt.maximizers)
    if (x == vec({2})) has_b = true;
  CHECK(has_b);

  OracleInstance costly = tiny(1e6);
  OptResult zero_opt = exact_opt(costly);
  REQUIRE(zero_opt.maximizers.size() == 1);
  CHECK(zero_opt.maximizers[0] == vec({0}));
  CHECK(zero_opt.value == doctest::Approx(0.0));
}

TEST_CASE("exact_opt d=1 matches direct comparison") {
  OracleInstance inst = tiny(0.9);
  OptResult opt = exact_opt(inst);
  double best = -1e30;
  MarketingVector arg;
  for (int k = 0; k <= 2; ++k) {
    double v = exact_profit(inst, vec({k}));
    if (v > best) best = v, arg = vec({k});
  }
  CHECK(opt.value == doctest::Approx(best));
  CHECK(opt.maximizers.front() == arg);
}

TEST_CASE("probability normalizations") {
  OracleInstance inst = tiny();
  double total = 0.0;
  enumerate_realizations(inst.model, [&](const Realization&, double p) { total += p; });
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  double seed_total = 0.0;
  for (std::uint64_t mask = 0; mask < 4; ++mask)
    seed_total += seed_set_probability(inst.params, vec({1}), mask);
  CHECK(seed_total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("LT enumeration also normalizes") {
  Graph g = make_graph(3, {{0, 2}, {1, 2}, {2, 0}});
  TriggeringModel m = uniform_model(g, ModelKind::LT, 0.4);
  double total = 0.0;
  enumerate_realizations(m, [&](const Realization&, double p) { total += p; });
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("check_dr_submodular on a modular function") {
  cpm::test::ModularObjective f({1.0, -0.5});
  Rng rng(3);
  DrReport rep = check_dr_submodular(f, vec({3, 3}), 500, rng);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_gap == doctest::Approx(0.0));
  CHECK(rep.negative_marginal_found);
}

TEST_CASE("exact profit is dr-submodular, with a non-monotone witness at high lambda") {
  OracleInstance inst = tiny(2.0);
  ExactProfitObjective f(inst);
  Rng rng(4);
  DrReport rep = check_dr_submodular(f, inst.bounds, 500, rng, 1e-9);
  CHECK(rep.violations == 0);
  CHECK(rep.negative_marginal_found);
}

TEST_CASE("caps are enforced") {
  OracleInstance inst;
  inst.graph = make_graph(7, {{0, 1}});
  inst.model = uniform_model(inst.graph, ModelKind::IC, 0.5);
  inst.params.eta = 0.8;
  inst.params.r = Eigen::MatrixXd::Constant(7, 1, 0.3);
  inst.bounds = vec({2});
  inst.cost = CostModel::uniform(1.0, 7, inst.bounds);
  CHECK_THROWS_AS(inst.validate_caps(), std::invalid_argument);
}

TEST_CASE("for_each_lattice_point visits the whole box") {
  int count = 0;
  for_each_lattice_point(vec({2, 3}), [&](const MarketingVector&) { ++count; });
  CHECK(count == 12);
}
