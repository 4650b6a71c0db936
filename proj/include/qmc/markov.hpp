#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

// Shape of one direct summand b^L (x) b^R.
struct SummandShape {
  std::size_t left = 1;
  std::size_t right = 1;

  std::size_t size() const noexcept { return left * right; }
  auto operator<=>(const SummandShape&) const = default;
};

// Isometric embedding of B into the direct sum (+)_j b_j^L (x) b_j^R.
//
// Row index of the isometry runs over the direct sum block by block; inside block j the
// index is l * right_j + r. Construction enforces W^dagger W = 1 and the caps
// k <= d_B^2, dim b^L, dim b^R <= d_B.
class Decomposition {
 public:
  Decomposition(std::vector<SummandShape> summands, ComplexMatrix isometry);

  // Basis vector |b> goes to the b-th slot of the direct sum, slots enumerated block by
  // block with the left factor running fastest, so a single (d_B, d_B) summand starts out
  // as b^L = B with b^R trivial.
  static Decomposition canonical(std::size_t input_dim, std::vector<SummandShape> summands);

  const std::vector<SummandShape>& summands() const noexcept { return summands_; }
  const ComplexMatrix& isometry() const noexcept { return isometry_; }
  std::size_t input_dim() const noexcept { return isometry_.cols(); }
  std::size_t embedded_dim() const noexcept { return isometry_.rows(); }
  std::size_t offset(std::size_t j) const { return offsets_.at(j); }

 private:
  std::vector<SummandShape> summands_;
  ComplexMatrix isometry_;
  std::vector<std::size_t> offsets_;
};

// Total dimension of a summand list and the row index of each block's first slot.
std::size_t total_dim(std::span<const SummandShape> summands);
std::vector<std::size_t> block_offsets(std::span<const SummandShape> summands);

// (+)_j q_j sigma^(j)_{A b_j^L} (x) chi^(j)_{b_j^R C}
class MarkovState {
 public:
  MarkovState(std::vector<double> weights, std::vector<ComplexMatrix> left,
              std::vector<ComplexMatrix> right, Decomposition decomposition, std::size_t d_a,
              std::size_t d_c);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<ComplexMatrix>& left() const noexcept { return left_; }
  const std::vector<ComplexMatrix>& right() const noexcept { return right_; }
  const Decomposition& decomposition() const noexcept { return decomposition_; }
  std::size_t d_a() const noexcept { return d_a_; }
  std::size_t d_c() const noexcept { return d_c_; }

 private:
  std::vector<double> weights_;
  std::vector<ComplexMatrix> left_;
  std::vector<ComplexMatrix> right_;
  Decomposition decomposition_;
  std::size_t d_a_;
  std::size_t d_c_;
};

// Block-diagonal state on A (x) B-hat (x) C, B-hat the direct sum.
TripartiteState assemble(const MarkovState& m);

// Block weights below this are dropped from the entropy sums.
inline constexpr double kBlockWeightTol = 1e-12;

struct BlockProjection {
  std::vector<double> weights;        // q_j
  std::vector<ComplexMatrix> blocks;  // omega^(j) on A (x) b_j^L (x) b_j^R (x) C, unit trace
};

// q_j and the normalized blocks of (1 (x) W (x) 1) rho (1 (x) W^dagger (x) 1). Blocks whose
// weight is below kBlockWeightTol are reported as maximally mixed.
BlockProjection project_omega_delta(const TripartiteState& rho, const Decomposition& d);

// rho embedded through W and pinched onto the direct-sum blocks: omega[delta].
ComplexMatrix omega_delta(const TripartiteState& rho, const Decomposition& d);

// The Markov state with this decomposition closest to rho: p_j = q_j and the marginals of
// each block.
MarkovState optimal_markov_for_decomposition(const TripartiteState& rho, const Decomposition& d);

// Eigen-factorized rho, sum_k |v_k><v_k|, used for repeated objective evaluations.
struct FactoredState {
  explicit FactoredState(const TripartiteState& rho);
  explicit FactoredState(const PureState& psi);  // psi over (d_A, d_B, d_C)

  Dims3 dims;
  std::vector<std::vector<cplx>> vectors;  // each indexed (a * d_B + b) * d_C + c
  double entropy = 0.0;
};

// -S(rho) + H(q) + sum_j q_j (S(sigma^(j)) + S(chi^(j))) for an isometry into the listed
// summands. No validation of w; callers pass isometries.
double relent_formula(const FactoredState& rho, const ComplexMatrix& w,
                      std::span<const SummandShape> summands);

// D(rho || omega[delta, tau]) from the block entropies.
double relent_via_formula(const TripartiteState& rho, const Decomposition& d);
// Same quantity as -S(rho) + S(J) + S(A b^L | J) + S(b^R C | J) on the J-register state.
double relent_compact_form(const TripartiteState& rho, const Decomposition& d);
// Same quantity as a direct relative entropy against the assembled optimal Markov state.
double relent_direct(const TripartiteState& rho, const Decomposition& d);

struct TwoRelents {
  double lhs;    // D(rho || omega[delta, tau])
  double term1;  // D(rho || omega[delta])
  double term2;  // sum_j q_j I(A b_j^L : b_j^R C)
};
TwoRelents two_relents_identity(const TripartiteState& rho, const Decomposition& d);

}  // namespace qmc
