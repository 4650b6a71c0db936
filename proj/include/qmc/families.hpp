#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmc/linalg.hpp"
#include "qmc/markov.hpp"

namespace qmc {

struct FamilyPoint {
  std::string family;                          // "psi-x", "zeta-d", "cq" or "random"
  std::optional<PureState> pure;               // set for the pure families
  TripartiteState state;
  std::map<std::string, double> closed_forms;  // S_A, S_B, cmi, delta_lower, delta_upper
  std::map<std::string, double> parameters;    // x, d, n
};

// Largest d_A d_B d_C accepted by zeta_d.
inline constexpr std::size_t kFamilyMaxDim = 200;

// (|phi_x>|0>|phi_x> + |phi_-x>|1>|phi_-x>)/sqrt 2 with |phi_x> = sqrt(1 - x^2)|0> + x|1>.
FamilyPoint psi_x(double x);

// Purification of the maximally mixed state on the symmetric subspace of C^d (x) C^d, the
// purifier being B of dimension d(d+1)/2.
FamilyPoint zeta_d(std::size_t d);

// Orthonormal basis of the symmetric subspace in the fixed order |ii> ascending, then
// (|ij> + |ji>)/sqrt 2 for i < j lexicographic. Columns of a d^2 x d(d+1)/2 matrix.
ComplexMatrix symmetric_basis(std::size_t d);

// sum_j p_j |j><j| (x) |psi_j><psi_j| (x) |j><j|, with A and C of dimension #probs.
FamilyPoint cq_ensemble(const std::vector<double>& probs, const std::vector<std::vector<cplx>>& states);

// One (d_B, 1) summand per POVM element, W_k = sqrt(M_k). Elements must be PSD and sum to 1.
Decomposition povm_decomposition(const std::vector<ComplexMatrix>& povm);

// S(A|K) + S(K|A) for the joint law p_j <psi_j|M_k|psi_j>.
double cq_information_distance(const std::vector<double>& probs,
                               const std::vector<std::vector<cplx>>& states,
                               const std::vector<ComplexMatrix>& povm);

// Ginibre-induced state of the given rank on the product space.
TripartiteState random_tripartite(const Dims3& dims, std::size_t rank, std::uint64_t seed);

// Haar isometry into a summand list drawn from the shapes with total dimension <= 2 d_B.
Decomposition random_decomposition(std::size_t d_b, std::uint64_t seed);

// Random weights and Ginibre components on the given summands; B is the direct sum itself.
MarkovState random_markov_state(std::size_t d_a, std::size_t d_c, std::vector<SummandShape> shapes,
                                std::uint64_t seed);

// assemble(random_markov_state(...)) rotated by a Haar unitary on B.
TripartiteState hidden_markov_state(std::size_t d_a, std::size_t d_c,
                                    std::vector<SummandShape> shapes, std::uint64_t seed);

// PSD square root through the eigendecomposition.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

}  // namespace qmc
