#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmc/errors.hpp"
#include "qmc/linalg.hpp"

namespace qmc {
namespace {

constexpr double kOffDiagonalThreshold = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (p != q) sum += std::norm(a(p, q));
  return std::sqrt(sum);
}

// Cyclic Jacobi. On return a is diagonal (up to the threshold) and, when v is non-null,
// v holds the accumulated rotations so that h = v diag(a) v^dagger.
void jacobi(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  const double threshold = kOffDiagonalThreshold * std::max(1.0, a.frobenius_norm());

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < threshold) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Rotations that cannot change the diagonal in floating point are skipped once
        // the sweep is past the first few passes.
        if (sweep > 3 && std::abs(app) + 100.0 * g == std::abs(app) &&
            std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * g);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx e = apq / g;
        const cplx s_e = s * e;               // J(p, q)
        const cplx ms_ec = -s * std::conj(e);  // J(q, p)

        // a <- a J
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * c + akq * ms_ec;
          a(k, q) = akp * s_e + akq * c;
        }
        // a <- J^dagger a
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s_e * aqk;
          a(q, k) = -ms_ec * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;

        if (v != nullptr) {
          ComplexMatrix& vm = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = vm(k, p);
            const cplx vkq = vm(k, q);
            vm(k, p) = vkp * c + vkq * ms_ec;
            vm(k, q) = vkp * s_e + vkq * c;
          }
        }
      }
    }
  }
}

void require_hermitian(const ComplexMatrix& h) {
  if (!h.is_square()) throw DimensionError("hermitian_eig: matrix is not square");
  if (hermiticity_defect(h) > kHermitianTol)
    throw ValidationError("hermitian_eig: matrix is not Hermitian");
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h);
  const std::size_t n = h.rows();
  ComplexMatrix a = h;
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi(a, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });
  EigenSystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  require_hermitian(h);
  ComplexMatrix a = h;
  jacobi(a, nullptr);
  std::vector<double> values(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) values[i] = a(i, i).real();
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  const EigenSystem es = hermitian_eig(h);
  const std::size_t n = h.rows();
  ComplexMatrix scaled = es.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx phase = std::polar(1.0, es.values[k]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= phase;
  }
  return scaled * es.vectors.adjoint();
}

}  // namespace qmc
