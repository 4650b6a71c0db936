#include "qmc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmc/errors.hpp"

namespace qmc {
namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double clamped(double v) {
  if (v < -kClampTol)
    throw ValidationError("negative eigenvalue " + std::to_string(v) + " below clamp tolerance");
  return v < 0.0 ? 0.0 : v;
}

void require_disjoint_labels(std::span<const std::size_t> x, std::span<const std::size_t> y,
                             std::size_t n) {
  if (x.empty() || y.empty()) throw DimensionError("subsystem label set is empty");
  for (std::size_t i : x) {
    if (i >= n) throw DimensionError("subsystem label out of range");
    for (std::size_t j : y)
      if (i == j) throw DimensionError("subsystem label sets overlap");
  }
  for (std::size_t j : y)
    if (j >= n) throw DimensionError("subsystem label out of range");
}

std::vector<std::size_t> joined(std::span<const std::size_t> x, std::span<const std::size_t> y) {
  std::vector<std::size_t> u(x.begin(), x.end());
  u.insert(u.end(), y.begin(), y.end());
  return u;
}

}  // namespace

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h -= xlog2x(clamped(v));
  return h;
}

double spectrum_entropy_unnormalized(std::span<const double> spectrum) {
  double h = 0.0;
  for (double v : spectrum) h -= xlog2x(v > 0.0 ? v : 0.0);
  return h;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  if (!rho.is_square()) throw DimensionError("von_neumann_entropy: matrix is not square");
  if (std::abs(rho.trace() - cplx{1.0}) > kTraceTol)
    throw ValidationError("von_neumann_entropy: trace is not 1");
  const std::vector<double> ev = hermitian_eigenvalues(rho);
  return shannon_entropy(ev);
}

EntropyReport quantum_relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (!rho.is_square() || !sigma.is_square() || rho.rows() != sigma.rows())
    throw DimensionError("quantum_relative_entropy: shape mismatch");
  require_density_matrix(rho, "quantum_relative_entropy rho");
  require_density_matrix(sigma, "quantum_relative_entropy sigma");

  const EigenSystem es = hermitian_eig(sigma);
  const std::size_t n = rho.rows();
  double cross = 0.0;   // tr rho log sigma on supp(sigma)
  double defect = 0.0;  // rho mass on ker(sigma)
  for (std::size_t k = 0; k < n; ++k) {
    // <u_k| rho |u_k>
    cplx m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += rho(i, j) * es.vectors(j, k);
      m += std::conj(es.vectors(i, k)) * row;
    }
    const double mass = std::max(m.real(), 0.0);
    if (es.values[k] <= kKernelTol)
      defect += mass;
    else
      cross += mass * std::log2(es.values[k]);
  }
  if (defect > kSupportTol) return {kInfiniteEntropy, defect, false};
  return {-von_neumann_entropy(rho) - cross, defect, true};
}

double subsystem_entropy(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                         std::span<const std::size_t> subsystems) {
  return von_neumann_entropy(partial_trace(rho, dims, subsystems));
}

double mutual_information(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                          std::span<const std::size_t> first, std::span<const std::size_t> second) {
  require_disjoint_labels(first, second, dims.size());
  const std::vector<std::size_t> both = joined(first, second);
  return subsystem_entropy(rho, dims, first) + subsystem_entropy(rho, dims, second) -
         subsystem_entropy(rho, dims, both);
}

double conditional_entropy(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                           std::span<const std::size_t> target,
                           std::span<const std::size_t> condition) {
  require_disjoint_labels(target, condition, dims.size());
  const std::vector<std::size_t> both = joined(target, condition);
  return subsystem_entropy(rho, dims, both) - subsystem_entropy(rho, dims, condition);
}

double conditional_mutual_information(const TripartiteState& state) {
  const std::vector<std::size_t> dims = state.dims().list();
  const ComplexMatrix& rho = state.matrix();
  const std::size_t ab[] = {0, 1};
  const std::size_t bc[] = {1, 2};
  const std::size_t b[] = {1};
  return subsystem_entropy(rho, dims, ab) + subsystem_entropy(rho, dims, bc) -
         subsystem_entropy(rho, dims, b) - von_neumann_entropy(rho);
}

double fannes_bound(double eps, std::size_t d) {
  if (!(eps > 0.0 && eps <= 1.0 / std::numbers::e))
    throw ValidationError("fannes_bound: eps must lie in (0, 1/e]");
  if (d == 0) throw DimensionError("fannes_bound: d must be positive");
  return -eps * std::log2(eps) + eps * std::log2(static_cast<double>(d));
}

double alicki_fannes_bound(double eps, std::size_t d) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("alicki_fannes_bound: eps must lie in (0, 1]");
  if (d == 0) throw DimensionError("alicki_fannes_bound: d must be positive");
  return -2.0 * xlog2x(eps) - 2.0 * xlog2x(1.0 - eps) + 4.0 * eps * std::log2(static_cast<double>(d));
}

double pinsker_floor(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_density_matrix(rho, "pinsker_floor rho");
  require_density_matrix(sigma, "pinsker_floor sigma");
  const double t = trace_norm(rho - sigma) / (2.0 * std::numbers::ln2);
  return t * t;
}

NearestPure nearest_pure(const ComplexMatrix& rho) {
  require_density_matrix(rho, "nearest_pure");
  const EigenSystem es = hermitian_eig(rho);
  std::vector<cplx> top(rho.rows());
  for (std::size_t i = 0; i < rho.rows(); ++i) top[i] = es.vectors(i, 0);
  double norm2 = 0.0;
  for (const cplx& z : top) norm2 += std::norm(z);
  for (cplx& z : top) z /= std::sqrt(norm2);
  return {PureState(std::move(top), {rho.rows()}), 2.0 * (1.0 - std::min(es.values[0], 1.0))};
}

}  // namespace qmc
