#pragma once

#include <iosfwd>

namespace cpm {

// Runs the oracle-backed verification suite, printing one pass/fail line
// per criterion with the measured values. Returns the number of failures.
int run_acceptance(std::ostream& os);

}  // namespace cpm
