#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

// Eigenvalues in [-kClampTol, 0) are treated as 0 before taking logarithms.
inline constexpr double kClampTol = 1e-9;
// sigma eigenvalues at or below this define its kernel.
inline constexpr double kKernelTol = 1e-12;
// rho mass inside that kernel above this makes the relative entropy infinite.
inline constexpr double kSupportTol = 1e-8;
inline constexpr double kInfiniteEntropy = std::numeric_limits<double>::max();

// Relative entropy value in bits. When finite is false, value holds kInfiniteEntropy and
// support_defect the rho mass found outside supp(sigma).
struct EntropyReport {
  double value = 0.0;
  double support_defect = 0.0;
  bool finite = true;
};

// -sum p log2 p with 0 log 0 = 0. Entries in [-kClampTol, 0) are clamped; anything more
// negative is a ValidationError.
double shannon_entropy(std::span<const double> p);

// Entropy of a spectrum that need not sum to one: -sum l log2 l.
double spectrum_entropy_unnormalized(std::span<const double> spectrum);

double von_neumann_entropy(const ComplexMatrix& rho);
EntropyReport quantum_relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// Entropy of the reduced state on the listed subsystems.
double subsystem_entropy(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                         std::span<const std::size_t> subsystems);

// I(X:Y) = S(X) + S(Y) - S(XY) for disjoint subsystem sets.
double mutual_information(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                          std::span<const std::size_t> first, std::span<const std::size_t> second);
// S(X|Y) = S(XY) - S(Y)
double conditional_entropy(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                           std::span<const std::size_t> target,
                           std::span<const std::size_t> condition);

// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC)
double conditional_mutual_information(const TripartiteState& state);

// Right-hand side of Fannes' inequality: -eps log eps + eps log d, for 0 < eps <= 1/e.
double fannes_bound(double eps, std::size_t d);
// Alicki-Fannes bound on conditional entropies: 2h(eps) + 4 eps log d, for 0 < eps <= 1.
double alicki_fannes_bound(double eps, std::size_t d);
// (||rho - sigma||_1 / (2 ln 2))^2, a floor for D(rho||sigma).
double pinsker_floor(const ComplexMatrix& rho, const ComplexMatrix& sigma);

struct NearestPure {
  PureState state;
  double distance;  // ||rho - |e1><e1| ||_1 = 2 (1 - lambda_1)
};
NearestPure nearest_pure(const ComplexMatrix& rho);

}  // namespace qmc
