#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qmc/linalg.hpp"
#include "qmc/markov.hpp"

namespace qmc {

enum class ShapeMode {
  automatic,  // enumerate for d_B <= 3, full up to max_input_dim
  trivial,    // one (d_B, d_B) summand
  enumerate,  // summand lists in increasing total dimension, up to max_embed_dim
  full,       // d_B^2 summands of shape (d_B, d_B)
};

struct OptConfig {
  std::size_t restarts = 4;
  std::size_t max_iters = 5000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  ShapeMode shape_mode = ShapeMode::automatic;
  double simplex_scale = 0.5;
  // Largest d_B accepted by the enumerate and full modes.
  std::size_t max_input_dim = 4;
  // Largest total summand dimension tried by enumerate mode; 0 means 2 d_B.
  std::size_t max_embed_dim = 0;
  // Worker threads for restarts; 0 means QMC_THREADS, else the machine's parallelism.
  std::size_t threads = 0;

  // Throws ValidationError when restarts == 0, tol <= 0 or simplex_scale <= 0.
  void validate() const;
};

struct RestartTrace {
  std::size_t restart = 0;      // global id, shape-major
  std::size_t shape_index = 0;  // index into the candidate shape list
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;  // best objective per iteration, nonincreasing
};

struct OptResult {
  double value = 0.0;
  Decomposition decomposition;
  double lower_bound = 0.0;
  std::vector<RestartTrace> trace;
  bool converged = false;
};

// Real coordinates around a starting isometry W0 (first d columns of the unitary base):
// W(theta) = base * exp(i H(theta)) * [1; 0], with H Hermitian and supported on the rows and
// columns that touch the first d coordinates. theta = 0 reproduces W0.
class IsometryChart {
 public:
  IsometryChart(const ComplexMatrix& start, std::size_t input_dim);

  std::size_t parameter_count() const noexcept;
  ComplexMatrix isometry(std::span<const double> theta) const;

 private:
  ComplexMatrix base_;  // N x N unitary whose first input_dim columns are the start
  std::size_t input_dim_;
};

// Candidate summand lists for enumerate mode: every multiset of shapes with factors in
// [1, d_B], at most d_B^2 summands and total dimension in [d_B, max_total], ordered by
// total dimension.
std::vector<std::vector<SummandShape>> enumerate_shapes(std::size_t d_b, std::size_t max_total);

// Shape lists a configuration searches for a given d_B.
std::vector<std::vector<SummandShape>> candidate_shapes(std::size_t d_b, const OptConfig& cfg);

std::size_t worker_count(const OptConfig& cfg);

// Upper estimate of the minimum relative entropy to a Markov state, with I(A:C|B) as the
// lower bound. Shape lists are tried in order; the search stops after the first list whose
// best value is within tol of the lower bound.
OptResult minimize_delta(const TripartiteState& rho, const OptConfig& cfg);

// Upper estimate of the entanglement of purification of rho_ac on (d_a, d_c).
OptResult minimize_ep(const ComplexMatrix& rho_ac, std::size_t d_a, std::size_t d_c,
                      const OptConfig& cfg);

// E_P of tr_B psi where psi is a pure state over (d_A, d_B, d_C), optimizing isometries
// B -> E (x) F with |E| = |F| = d_B directly on psi's B register.
OptResult minimize_ep_pure(const PureState& psi, const OptConfig& cfg);

// min over measurements delta of H(q) + 2 sum_j q_j E_P(rho_AC^(j)) for a pure input.
OptResult pure_delta(const PureState& psi, const OptConfig& cfg);
// Same, for a density matrix that must be pure (entropy <= 1e-8).
OptResult pure_delta(const TripartiteState& rho, const OptConfig& cfg);

struct CertifiedGap {
  double lower = 0.0;  // I(A:C|B)
  double upper = 0.0;  // minimize_delta value
};
CertifiedGap certified_gap(const TripartiteState& rho, const OptConfig& cfg);

}  // namespace qmc
