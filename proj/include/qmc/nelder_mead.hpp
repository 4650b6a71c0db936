#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qmc {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double scale = 0.5;          // initial simplex edge along each coordinate
  std::size_t max_iters = 5000;
  double tol = 1e-9;           // stop when max f - min f over the simplex drops below this
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;  // best value after each iteration; nonincreasing
};

// Derivative-free simplex minimization with dimension-adapted coefficients
// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options);

}  // namespace qmc
