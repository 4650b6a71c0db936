#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qmc/entropy.hpp"

namespace qmc {

// Joint distribution P(x, y, z), stored row-major with z fastest.
class ClassicalJoint {
 public:
  ClassicalJoint(std::array<std::size_t, 3> shape, std::vector<double> table);

  const std::array<std::size_t, 3>& shape() const noexcept { return shape_; }
  const std::vector<double>& table() const noexcept { return table_; }

  double operator()(std::size_t x, std::size_t y, std::size_t z) const {
    return table_[(x * shape_[1] + y) * shape_[2] + z];
  }

  std::vector<double> marginal_y() const;

 private:
  std::array<std::size_t, 3> shape_;
  std::vector<double> table_;
};

inline constexpr double kJointSumTol = 1e-12;

// I(X:Z|Y) in bits.
double classical_cmi(const ClassicalJoint& p);

// Q(x,y,z) = P(y) P(x|y) P(z|y). Conditionals at P(y) = 0 are taken uniform.
ClassicalJoint closest_markov(const ClassicalJoint& p);

EntropyReport classical_relative_entropy(const ClassicalJoint& p, const ClassicalJoint& q);

bool is_markov(const ClassicalJoint& p, double tol);

}  // namespace qmc
