#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cpm/strategy.hpp"
#include "test_util.hpp"

using namespace cpm;
using cpm::test::vec;

namespace {

StrategyParams worked_example() {
  StrategyParams p;
  p.eta = 0.8;
  p.r.resize(1, 5);
  p.r << 0.1, 0.04, 0.08, 0.0, 0.05;
  return p;
}

}  // namespace

TEST_CASE("seed_probability worked example") {
  StrategyParams p = worked_example();
  CHECK(seed_probability(p, 0, vec({1, 3, 0, 0, 2})) == doctest::Approx(0.257).epsilon(0.004));
}

TEST_CASE("seed_probability trivial points") {
  StrategyParams p = worked_example();
  CHECK(seed_probability(p, 0, vec({0, 0, 0, 0, 0})) == 0.0);
  StrategyParams q;
  q.eta = 0.8;
  q.r.resize(1, 1);
  q.r << 0.37;
  CHECK(seed_probability(q, 0, vec({1})) == doctest::Approx(0.37));
}

TEST_CASE("seed_probability stays in [0,1], monotone, diminishing returns") {
  Rng rng(3);
  StrategyParams p = sample_random_strategy_params(
      4, 3, {{0.0, 1.0}, {0.0, 0.5}, {0.2, 0.9}}, 0.8, rng);
  Bounds b = vec({4, 4, 4});
  for (int t = 0; t < 1000; ++t) {
    MarketingVector y(3), x(3);
    for (int i = 0; i < 3; ++i) {
      y(i) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(b(i))));
      x(i) = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(y(i) + 1)));
    }
    int i = static_cast<int>(rng.uniform_int(3));
    for (int u = 0; u < 4; ++u) {
      double hx = seed_probability(p, u, x), hy = seed_probability(p, u, y);
      CHECK(hx >= 0.0);
      CHECK(hy <= 1.0);
      CHECK(hx <= hy + 1e-12);
      MarketingVector xi = x, yi = y;
      ++xi(i), ++yi(i);
      double gx = seed_probability(p, u, xi) - hx;
      double gy = seed_probability(p, u, yi) - hy;
      CHECK(gx >= gy - 1e-12);
    }
  }
}

TEST_CASE("uniform cost model") {
  Bounds b = vec({5, 5, 5, 5, 5});
  CostModel cm = CostModel::uniform(1.0, 100, b);
  for (int i = 0; i < 5; ++i) CHECK(cm.unit_costs(i) == doctest::Approx(4.0));
  CHECK(cost(cm, b) == doctest::Approx(100.0));
  CHECK(cost(cm, vec({0, 0, 0, 0, 0})) == 0.0);
  CostModel zero = CostModel::uniform(0.0, 100, b);
  CHECK(cost(zero, b) == 0.0);
}

TEST_CASE("cost is additive per unit") {
  Bounds b = vec({3, 2});
  CostModel cm = CostModel::uniform(1.7, 10, b);
  MarketingVector x = vec({1, 2});
  for (int i = 0; i < 2; ++i) {
    MarketingVector y = x;
    ++y(i);
    CHECK(cost(cm, y) - cost(cm, x) == doctest::Approx(cm.unit_costs(i)));
  }
}

TEST_CASE("sample_seed_set degenerate probabilities") {
  StrategyParams p;
  p.eta = 0.8;
  p.r.resize(3, 1);
  p.r << 0.4, 0.0, 1.0;
  Rng rng(5);
  CHECK(sample_seed_set(p, vec({0}), rng).empty());
  for (int t = 0; t < 100; ++t) {
    auto seeds = sample_seed_set(p, vec({1}), rng);
    CHECK(std::find(seeds.begin(), seeds.end(), 2) != seeds.end());
    CHECK(std::find(seeds.begin(), seeds.end(), 1) == seeds.end());
  }
}

TEST_CASE("sample_seed_set empirical inclusion frequency") {
  StrategyParams p = worked_example();
  MarketingVector x = vec({1, 3, 0, 0, 2});
  double h = seed_probability(p, 0, x);
  Rng rng(6);
  const int draws = 100000;
  int hits = 0;
  for (int t = 0; t < draws; ++t)
    if (!sample_seed_set(p, x, rng).empty()) ++hits;
  double freq = static_cast<double>(hits) / draws;
  CHECK(std::abs(freq - h) <= 4 * std::sqrt(h * (1 - h) / draws));
}

TEST_CASE("sample_random_strategy_params ranges") {
  Rng rng(7);
  StrategyParams zero = sample_random_strategy_params(5, 2, {{0.0, 0.0}, {0.0, 0.0}}, 0.8, rng);
  CHECK(zero.r.isZero());
  StrategyParams p = sample_random_strategy_params(
      5000, 2, {{0.0, 0.1}, {0.3, 0.4}}, 0.8, rng);
  CHECK(p.r.col(0).mean() == doctest::Approx(0.05).epsilon(0.06));
  CHECK(p.r.col(0).maxCoeff() <= 0.1);
  CHECK(p.r.col(1).minCoeff() >= 0.3);
}

TEST_CASE("params CSV round trip with zero omission") {
  StrategyParams p = worked_example();
  std::ostringstream out;
  write_params_csv(out, p);
  CHECK(out.str().rfind("node,action,r", 0) == 0);
  std::istringstream in(out.str());
  StrategyParams q = read_params_csv(in, 1, 5, 0.8);
  CHECK((q.r - p.r).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("bounds validation and lattice size") {
  CHECK_THROWS_AS(validate_bounds(vec({2, 0})), std::invalid_argument);
  CHECK_NOTHROW(validate_bounds(vec({1, 1})));
  CHECK(lattice_point_count(vec({2, 2})) == doctest::Approx(9.0));
  CHECK(lattice_leq(vec({1, 2}), vec({1, 3})));
  CHECK_FALSE(lattice_leq(vec({2, 2}), vec({1, 3})));
}

TEST_CASE("params validation") {
  StrategyParams p = worked_example();
  p.eta = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = worked_example();
  p.r(0, 0) = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
