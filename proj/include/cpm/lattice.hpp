#pragma once

#include "cpm/strategy.hpp"

namespace cpm {

// A lattice function queried by the optimizer: point values and unit
// marginals f(x + dir*e_i) - f(x). Implementations must return identical
// values for repeated queries at the same point within a run.
class LatticeObjective {
 public:
  virtual ~LatticeObjective() = default;

  virtual double value(const MarketingVector& x) = 0;

  // dir is +1 or -1
  virtual double marginal(const MarketingVector& x, int i, int dir) {
    MarketingVector y = x;
    y(i) += dir;
    return value(y) - value(x);
  }
};

}  // namespace cpm
