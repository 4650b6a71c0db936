#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qmc {

using cplx = std::complex<double>;

// Tolerances shared by the validation routines.
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kIsometryTol = 1e-9;
inline constexpr double kNormTol = 1e-10;

// Dense complex matrix, row-major. Always at least 1x1.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1, 1) {}
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  // |v><v|
  static ComplexMatrix projector(std::span<const cplx> v);
  // Column vector.
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> entries() noexcept { return data_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  double frobenius_norm() const;

  // Columns [first, first + count).
  ComplexMatrix columns(std::size_t first, std::size_t count) const;
  // Square sub-block on rows/cols [first, first + count).
  ComplexMatrix principal_block(std::size_t first, std::size_t count) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<cplx> data_;
};

// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// max_ij |m_ij - conj(m_ji)|
double hermiticity_defect(const ComplexMatrix& m);
// max_ij |(w^dagger w - I)_ij|
double isometry_defect(const ComplexMatrix& w);

std::size_t product(std::span<const std::size_t> dims);

// Throws ValidationError unless m is Hermitian, unit trace and PSD within the shared tolerances.
void require_density_matrix(const ComplexMatrix& m, const char* what = "density matrix");

struct Dims3 {
  std::size_t a = 1;
  std::size_t b = 1;
  std::size_t c = 1;

  std::size_t total() const noexcept { return a * b * c; }
  std::vector<std::size_t> list() const { return {a, b, c}; }
  bool operator==(const Dims3&) const = default;
};

// Density matrix on A (x) B (x) C. Validated on construction.
class TripartiteState {
 public:
  TripartiteState(ComplexMatrix matrix, Dims3 dims);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Dims3& dims() const noexcept { return dims_; }

 private:
  ComplexMatrix matrix_;
  Dims3 dims_;
};

// Normalized state vector over an ordered list of subsystems.
class PureState {
 public:
  PureState(std::vector<cplx> amplitudes, std::vector<std::size_t> dims);

  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  ComplexMatrix density() const;

 private:
  std::vector<cplx> amplitudes_;
  std::vector<std::size_t> dims_;
};

struct EigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns, matching values
};

// Cyclic Jacobi diagonalization of a Hermitian matrix.
EigenSystem hermitian_eig(const ComplexMatrix& h);
// Eigenvalues only (descending); skips the eigenvector accumulation.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced matrix on the subsystems listed in keep (kept in their original order).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

double trace_norm(const ComplexMatrix& m);

// Canonical purification on (d, rank).
PureState purify(const ComplexMatrix& rho);

// (1 (x) w (x) 1) m (1 (x) w^dagger (x) 1) with w acting on dims[subsystem].
// Returns the matrix on the enlarged dims; new_dims receives them when non-null.
ComplexMatrix apply_isometry(const ComplexMatrix& m, std::span<const std::size_t> dims,
                             const ComplexMatrix& w, std::size_t subsystem,
                             std::vector<std::size_t>* new_dims = nullptr);
TripartiteState apply_isometry(const TripartiteState& state, const ComplexMatrix& w,
                               std::size_t subsystem);

// Sum_j (1 (x) |j><j| (x) 1) m (1 (x) |j><j| (x) 1) over the chosen register's basis.
ComplexMatrix dephase(const ComplexMatrix& m, std::span<const std::size_t> dims,
                      std::size_t reg);

// Haar-distributed isometry C^from_dim -> C^to_dim (orthonormalized Gaussian matrix).
ComplexMatrix random_haar_isometry(std::size_t from_dim, std::size_t to_dim, std::uint64_t seed);
// Ginibre state G G^dagger / tr, G of shape dim x rank.
ComplexMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);

// Modified Gram-Schmidt on the columns of g, in place. Columns whose residual norm falls
// below tiny are zeroed. Returns the upper-triangular factor (cols x cols).
ComplexMatrix gram_schmidt(ComplexMatrix& g, double tiny = 1e-13);

// Matrix exponential exp(i h) of a Hermitian h.
ComplexMatrix expi_hermitian(const ComplexMatrix& h);

}  // namespace qmc
