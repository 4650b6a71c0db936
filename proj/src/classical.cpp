#include "qmc/classical.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qmc/errors.hpp"

namespace qmc {

ClassicalJoint::ClassicalJoint(std::array<std::size_t, 3> shape, std::vector<double> table)
    : shape_(shape), table_(std::move(table)) {
  if (shape_[0] == 0 || shape_[1] == 0 || shape_[2] == 0)
    throw DimensionError("ClassicalJoint: zero alphabet size");
  if (table_.size() != shape_[0] * shape_[1] * shape_[2])
    throw DimensionError("ClassicalJoint: table has " + std::to_string(table_.size()) +
                         " entries, shape requires " +
                         std::to_string(shape_[0] * shape_[1] * shape_[2]));
  double sum = 0.0;
  for (double v : table_) {
    if (!(v >= 0.0)) throw ValidationError("ClassicalJoint: negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kJointSumTol) throw ValidationError("ClassicalJoint: entries do not sum to 1");
}

std::vector<double> ClassicalJoint::marginal_y() const {
  std::vector<double> py(shape_[1], 0.0);
  for (std::size_t x = 0; x < shape_[0]; ++x)
    for (std::size_t y = 0; y < shape_[1]; ++y)
      for (std::size_t z = 0; z < shape_[2]; ++z) py[y] += (*this)(x, y, z);
  return py;
}

namespace {

struct Marginals {
  std::vector<double> y;   // P(y)
  std::vector<double> xy;  // P(x, y)
  std::vector<double> yz;  // P(y, z)
};

Marginals marginals(const ClassicalJoint& p) {
  const auto [nx, ny, nz] = p.shape();
  Marginals m{std::vector<double>(ny), std::vector<double>(nx * ny), std::vector<double>(ny * nz)};
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z) {
        const double v = p(x, y, z);
        m.y[y] += v;
        m.xy[x * ny + y] += v;
        m.yz[y * nz + z] += v;
      }
  return m;
}

}  // namespace

double classical_cmi(const ClassicalJoint& p) {
  const auto [nx, ny, nz] = p.shape();
  const Marginals m = marginals(p);
  // P(xz|y) / (P(x|y) P(z|y)) = P(xyz) P(y) / (P(xy) P(yz))
  double i = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z) {
        const double v = p(x, y, z);
        if (v <= 0.0) continue;
        i += v * std::log2(v * m.y[y] / (m.xy[x * ny + y] * m.yz[y * nz + z]));
      }
  return std::max(i, 0.0);
}

ClassicalJoint closest_markov(const ClassicalJoint& p) {
  const auto [nx, ny, nz] = p.shape();
  const Marginals m = marginals(p);
  std::vector<double> q(p.table().size(), 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    if (m.y[y] <= 0.0) continue;  // null slice: Q(y) = 0, conditionals irrelevant
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z)
        q[(x * ny + y) * nz + z] = m.xy[x * ny + y] * m.yz[y * nz + z] / m.y[y];
  }
  // Restore exact normalization lost to rounding.
  const double sum = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& v : q) v /= sum;
  return ClassicalJoint(p.shape(), std::move(q));
}

EntropyReport classical_relative_entropy(const ClassicalJoint& p, const ClassicalJoint& q) {
  if (p.shape() != q.shape()) throw DimensionError("classical_relative_entropy: alphabets differ");
  double d = 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < p.table().size(); ++i) {
    const double a = p.table()[i];
    const double b = q.table()[i];
    if (a <= 0.0) continue;
    if (b <= 0.0) {
      defect += a;
      continue;
    }
    d += a * std::log2(a / b);
  }
  if (defect > 0.0) return {kInfiniteEntropy, defect, false};
  return {d, 0.0, true};
}

bool is_markov(const ClassicalJoint& p, double tol) { return classical_cmi(p) <= tol; }

}  // namespace qmc
