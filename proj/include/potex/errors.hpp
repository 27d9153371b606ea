#pragma once

#include <stdexcept>

namespace potex {

// Invalid numeric argument: out-of-range index, nonpositive parameter, ...
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sampling grid too coarse for the requested truncation degree.
struct grid_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Robin denominator a - b(k+1) vanishes (or nearly vanishes) for some degree.
struct admissibility_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation needs an infinitesimal generator the trace family does not have.
struct unsupported_problem_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be read, parsed, or written.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace potex
