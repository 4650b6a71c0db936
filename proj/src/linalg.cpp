#include "qmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmc/errors.hpp"
#include "qmc/random.hpp"

namespace qmc {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: zero dimension");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: zero dimension");
  if (data_.size() != rows * cols)
    throw DimensionError("ComplexMatrix: expected " + std::to_string(rows * cols) +
                         " entries, got " + std::to_string(data_.size()));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const cplx> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace: matrix is not square");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix ComplexMatrix::columns(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > cols_) throw DimensionError("columns: range out of bounds");
  ComplexMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

ComplexMatrix ComplexMatrix::principal_block(std::size_t first, std::size_t count) const {
  if (!is_square() || count == 0 || first + count > rows_)
    throw DimensionError("principal_block: range out of bounds");
  ComplexMatrix out(count, count);
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(first + r, first + c);
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("+: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("-: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("*: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("hermiticity_defect: matrix is not square");
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

double isometry_defect(const ComplexMatrix& w) {
  return max_abs_diff(w.adjoint() * w, ComplexMatrix::identity(w.cols()));
}

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void require_density_matrix(const ComplexMatrix& m, const char* what) {
  const std::string name(what);
  if (!m.is_square()) throw DimensionError(name + ": matrix is not square");
  if (hermiticity_defect(m) > kHermitianTol) throw ValidationError(name + ": not Hermitian");
  if (std::abs(m.trace() - cplx{1.0}) > kTraceTol)
    throw ValidationError(name + ": trace is not 1");
  const std::vector<double> ev = hermitian_eigenvalues(m);
  if (ev.back() < -kPsdTol) throw ValidationError(name + ": not positive semidefinite");
}

TripartiteState::TripartiteState(ComplexMatrix matrix, Dims3 dims)
    : matrix_(std::move(matrix)), dims_(dims) {
  if (dims.a == 0 || dims.b == 0 || dims.c == 0)
    throw DimensionError("TripartiteState: zero subsystem dimension");
  if (!matrix_.is_square() || matrix_.rows() != dims.total())
    throw DimensionError("TripartiteState: matrix side " + std::to_string(matrix_.rows()) +
                         " does not match d_A*d_B*d_C = " + std::to_string(dims.total()));
  require_density_matrix(matrix_, "TripartiteState");
}

PureState::PureState(std::vector<cplx> amplitudes, std::vector<std::size_t> dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (dims_.empty() || product(dims_) != amplitudes_.size() || amplitudes_.empty())
    throw DimensionError("PureState: dims do not match the amplitude count");
  double n2 = 0.0;
  for (const cplx& z : amplitudes_) n2 += std::norm(z);
  if (std::abs(std::sqrt(n2) - 1.0) > kNormTol) throw ValidationError("PureState: not normalized");
}

ComplexMatrix PureState::density() const { return ComplexMatrix::projector(amplitudes_); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

namespace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Flat offsets for every multi-index over the listed subsystems.
std::vector<std::size_t> offsets_over(std::span<const std::size_t> dims,
                                      std::span<const std::size_t> strides,
                                      const std::vector<std::size_t>& which) {
  std::vector<std::size_t> out{0};
  for (std::size_t w : which) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[w]);
    for (std::size_t base : out)
      for (std::size_t d = 0; d < dims[w]; ++d) next.push_back(base + d * strides[w]);
    out = std::move(next);
  }
  return out;
}

void require_square_with_dims(const ComplexMatrix& m, std::span<const std::size_t> dims,
                              const char* op) {
  if (dims.empty() || !m.is_square() || m.rows() != product(dims))
    throw DimensionError(std::string(op) + ": product of dims does not match matrix side");
}

// (1 (x) op (x) 1) m, with op acting on the subsystem of size d_in sitting between pre and post.
ComplexMatrix left_apply(const ComplexMatrix& m, std::size_t pre, std::size_t d_in,
                         std::size_t post, const ComplexMatrix& op) {
  const std::size_t d_out = op.rows();
  const std::size_t n = m.cols();
  ComplexMatrix out(pre * d_out * post, n);
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t so = 0; so < d_out; ++so)
      for (std::size_t si = 0; si < d_in; ++si) {
        const cplx w = op(so, si);
        if (w == cplx{}) continue;
        for (std::size_t q = 0; q < post; ++q) {
          const std::size_t ro = (p * d_out + so) * post + q;
          const std::size_t ri = (p * d_in + si) * post + q;
          for (std::size_t c = 0; c < n; ++c) out(ro, c) += w * m(ri, c);
        }
      }
  return out;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  require_square_with_dims(m, dims, "partial_trace");
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.back() >= dims.size())
    throw DimensionError("partial_trace: invalid subsystem index in keep set");
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);

  const std::vector<std::size_t> strides = strides_of(dims);
  const std::vector<std::size_t> ko = offsets_over(dims, strides, kept);
  const std::vector<std::size_t> to = offsets_over(dims, strides, traced);
  ComplexMatrix out(ko.size(), ko.size());
  for (std::size_t i = 0; i < ko.size(); ++i)
    for (std::size_t j = 0; j < ko.size(); ++j) {
      cplx s = 0.0;
      for (std::size_t t : to) s += m(ko[i] + t, ko[j] + t);
      out(i, j) = s;
    }
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("trace_norm: matrix is not square");
  double scale = std::max(1.0, m.frobenius_norm());
  if (hermiticity_defect(m) <= 1e-12 * scale) {
    double s = 0.0;
    for (double v : hermitian_eigenvalues(m)) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : hermitian_eigenvalues(m.adjoint() * m)) s += std::sqrt(std::max(v, 0.0));
  return s;
}

PureState purify(const ComplexMatrix& rho) {
  require_density_matrix(rho, "purify");
  const EigenSystem es = hermitian_eig(rho);
  const std::size_t d = rho.rows();
  std::size_t rank = 0;
  while (rank < d && es.values[rank] > 1e-12) ++rank;
  rank = std::max<std::size_t>(rank, 1);
  std::vector<cplx> amp(d * rank);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < rank; ++k) norm2 += std::max(es.values[k], 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < rank; ++k)
      amp[i * rank + k] = std::sqrt(std::max(es.values[k], 0.0) / norm2) * es.vectors(i, k);
  return PureState(std::move(amp), {d, rank});
}

ComplexMatrix apply_isometry(const ComplexMatrix& m, std::span<const std::size_t> dims,
                             const ComplexMatrix& w, std::size_t subsystem,
                             std::vector<std::size_t>* new_dims) {
  require_square_with_dims(m, dims, "apply_isometry");
  if (subsystem >= dims.size()) throw DimensionError("apply_isometry: subsystem out of range");
  if (w.cols() != dims[subsystem])
    throw DimensionError("apply_isometry: isometry input dimension does not match subsystem");
  if (isometry_defect(w) > kIsometryTol) throw ValidationError("apply_isometry: w is not isometric");
  std::size_t pre = 1, post = 1;
  for (std::size_t i = 0; i < subsystem; ++i) pre *= dims[i];
  for (std::size_t i = subsystem + 1; i < dims.size(); ++i) post *= dims[i];

  const ComplexMatrix x = left_apply(m, pre, dims[subsystem], post, w);
  ComplexMatrix out = left_apply(x.adjoint(), pre, dims[subsystem], post, w).adjoint();
  if (new_dims != nullptr) {
    *new_dims = std::vector<std::size_t>(dims.begin(), dims.end());
    (*new_dims)[subsystem] = w.rows();
  }
  return out;
}

TripartiteState apply_isometry(const TripartiteState& state, const ComplexMatrix& w,
                               std::size_t subsystem) {
  const std::vector<std::size_t> dims = state.dims().list();
  std::vector<std::size_t> nd;
  ComplexMatrix out = apply_isometry(state.matrix(), dims, w, subsystem, &nd);
  return TripartiteState(std::move(out), Dims3{nd[0], nd[1], nd[2]});
}

ComplexMatrix dephase(const ComplexMatrix& m, std::span<const std::size_t> dims, std::size_t reg) {
  require_square_with_dims(m, dims, "dephase");
  if (reg >= dims.size()) throw DimensionError("dephase: register index out of range");
  const std::size_t stride = strides_of(dims)[reg];
  const std::size_t d = dims[reg];
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if ((i / stride) % d != (j / stride) % d) out(i, j) = 0.0;
  return out;
}

ComplexMatrix gram_schmidt(ComplexMatrix& g, double tiny) {
  const std::size_t n = g.rows();
  const std::size_t k = g.cols();
  ComplexMatrix r(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      cplx dot = 0.0;
      for (std::size_t t = 0; t < n; ++t) dot += std::conj(g(t, i)) * g(t, j);
      r(i, j) = dot;
      for (std::size_t t = 0; t < n; ++t) g(t, j) -= dot * g(t, i);
    }
    double norm = 0.0;
    for (std::size_t t = 0; t < n; ++t) norm += std::norm(g(t, j));
    norm = std::sqrt(norm);
    if (norm < tiny) {
      for (std::size_t t = 0; t < n; ++t) g(t, j) = 0.0;
      r(j, j) = 0.0;
      continue;
    }
    r(j, j) = norm;
    for (std::size_t t = 0; t < n; ++t) g(t, j) /= norm;
  }
  return r;
}

ComplexMatrix random_haar_isometry(std::size_t from_dim, std::size_t to_dim, std::uint64_t seed) {
  if (from_dim == 0 || from_dim > to_dim)
    throw DimensionError("random_haar_isometry: need 1 <= from_dim <= to_dim");
  Rng rng(seed);
  ComplexMatrix g(to_dim, from_dim);
  for (cplx& z : g.entries()) z = rng.complex_normal();
  gram_schmidt(g);
  return g;
}

ComplexMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (dim == 0 || rank == 0 || rank > dim)
    throw DimensionError("random_density: rank must lie in [1, dim]");
  Rng rng(seed);
  ComplexMatrix g(dim, rank);
  for (cplx& z : g.entries()) z = rng.complex_normal();
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  // exact Hermitian symmetry
  for (std::size_t i = 0; i < dim; ++i) {
    rho(i, i) = rho(i, i).real();
    for (std::size_t j = i + 1; j < dim; ++j) rho(j, i) = std::conj(rho(i, j));
  }
  return rho;
}

}  // namespace qmc
