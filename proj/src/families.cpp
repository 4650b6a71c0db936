#include "qmc/families.hpp"

#include <cmath>
#include <string>

#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"
#include "qmc/optimizer.hpp"
#include "qmc/random.hpp"

namespace qmc {

namespace {

double h2(double p) { return shannon_entropy(std::vector<double>{p, 1.0 - p}); }

double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

FamilyPoint from_pure(std::string family, PureState psi) {
  const auto& d = psi.dims();
  TripartiteState rho(psi.density(), Dims3{d[0], d[1], d[2]});
  return FamilyPoint{std::move(family), std::move(psi), std::move(rho), {}, {}};
}

}  // namespace

FamilyPoint psi_x(double x) {
  if (!(x > 0.0 && x < 1.0)) throw ValidationError("psi_x: x must lie in (0, 1)");
  const double y = std::sqrt(1.0 - x * x);
  const double s = 1.0 / std::sqrt(2.0);
  const double plus[2] = {y, x};
  const double minus[2] = {y, -x};
  std::vector<cplx> amp(8);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t c = 0; c < 2; ++c) {
      amp[(a * 2 + 0) * 2 + c] = s * plus[a] * plus[c];
      amp[(a * 2 + 1) * 2 + c] = s * minus[a] * minus[c];
    }
  FamilyPoint p = from_pure("psi-x", PureState(std::move(amp), {2, 2, 2}));
  const double x2 = x * x, y2 = y * y;
  const double s_a = h2(x2);
  const double s_b = -xlog2x(x2 * x2 + y2 * y2) - xlog2x(2.0 * x2 * y2);
  p.closed_forms = {{"S_A", s_a},           {"S_B", s_b},
                    {"cmi", 2 * s_a - s_b}, {"delta_lower", s_a},
                    {"delta_upper", 2 * s_a}};
  p.parameters = {{"x", x}};
  return p;
}

ComplexMatrix symmetric_basis(std::size_t d) {
  const std::size_t r = d * (d + 1) / 2;
  ComplexMatrix basis(d * d, r);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) basis(i * d + i, k++) = 1.0;
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      basis(i * d + j, k) = s;
      basis(j * d + i, k) = s;
      ++k;
    }
  return basis;
}

FamilyPoint zeta_d(std::size_t d) {
  if (d < 2) throw ValidationError("zeta_d: d must be at least 2");
  const std::size_t r = d * (d + 1) / 2;
  if (d * d * r > kFamilyMaxDim)
    throw DimensionError("zeta_d: d = " + std::to_string(d) + " exceeds the dimension budget");
  const ComplexMatrix basis = symmetric_basis(d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(r));
  std::vector<cplx> amp(d * r * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t c = 0; c < d; ++c) amp[(a * r + k) * d + c] = norm * basis(a * d + c, k);
  FamilyPoint p = from_pure("zeta-d", PureState(std::move(amp), {d, r, d}));
  const double dd = static_cast<double>(d);
  p.closed_forms = {{"S_A", std::log2(dd)},
                    {"S_B", std::log2(static_cast<double>(r))},
                    {"cmi", 1.0 + std::log2(dd / (dd + 1.0))},
                    {"delta_lower", std::log2(dd)},
                    {"delta_upper", 2.0 * std::log2(dd)}};
  p.parameters = {{"d", dd}};
  return p;
}

FamilyPoint cq_ensemble(const std::vector<double>& probs, const std::vector<std::vector<cplx>>& states) {
  if (probs.empty() || probs.size() != states.size())
    throw DimensionError("cq_ensemble: need one state per probability");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ValidationError("cq_ensemble: probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("cq_ensemble: probabilities must sum to 1");
  const std::size_t n = probs.size();
  const std::size_t db = states.front().size();
  for (const auto& s : states) {
    if (s.size() != db || db == 0) throw DimensionError("cq_ensemble: states must share one dimension");
    double nrm = 0.0;
    for (const cplx& z : s) nrm += std::norm(z);
    if (std::abs(nrm - 1.0) > kNormTol) throw ValidationError("cq_ensemble: states must be normalized");
  }
  const std::size_t side = n * db * n;
  ComplexMatrix rho(side, side);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t b2 = 0; b2 < db; ++b2)
        rho((j * db + b) * n + j, (j * db + b2) * n + j) = probs[j] * states[j][b] * std::conj(states[j][b2]);
  FamilyPoint p{"cq", std::nullopt, TripartiteState(std::move(rho), Dims3{n, db, n}), {}, {}};
  p.closed_forms = {{"S_A", shannon_entropy(probs)}};
  p.parameters = {{"n", static_cast<double>(n)}, {"d_B", static_cast<double>(db)}};
  return p;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const EigenSystem es = hermitian_eig(m);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (es.values[k] < -kPsdTol) throw ValidationError("psd_sqrt: matrix is not positive semidefinite");
    const double s = std::sqrt(std::max(es.values[k], 0.0));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += s * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return out;
}

Decomposition povm_decomposition(const std::vector<ComplexMatrix>& povm) {
  if (povm.empty()) throw DimensionError("povm_decomposition: empty POVM");
  const std::size_t db = povm.front().rows();
  ComplexMatrix sum(db, db);
  std::vector<SummandShape> shapes;
  ComplexMatrix w(db * povm.size(), db);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    if (povm[k].rows() != db || !povm[k].is_square())
      throw DimensionError("povm_decomposition: elements must share one square shape");
    sum = sum + povm[k];
    const ComplexMatrix root = psd_sqrt(povm[k]);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t b = 0; b < db; ++b) w(k * db + i, b) = root(i, b);
    shapes.push_back({db, 1});
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(db)) > kIsometryTol)
    throw ValidationError("povm_decomposition: elements do not sum to the identity");
  return Decomposition(std::move(shapes), std::move(w));
}

double cq_information_distance(const std::vector<double>& probs,
                               const std::vector<std::vector<cplx>>& states,
                               const std::vector<ComplexMatrix>& povm) {
  if (probs.size() != states.size()) throw DimensionError("cq_information_distance: size mismatch");
  std::vector<double> joint, pa(probs.size(), 0.0), pk(povm.size(), 0.0);
  for (std::size_t j = 0; j < probs.size(); ++j)
    for (std::size_t k = 0; k < povm.size(); ++k) {
      const auto& psi = states[j];
      if (povm[k].rows() != psi.size()) throw DimensionError("cq_information_distance: size mismatch");
      cplx e = 0.0;
      for (std::size_t a = 0; a < psi.size(); ++a)
        for (std::size_t b = 0; b < psi.size(); ++b) e += std::conj(psi[a]) * povm[k](a, b) * psi[b];
      const double v = probs[j] * std::max(e.real(), 0.0);
      joint.push_back(v);
      pa[j] += v;
      pk[k] += v;
    }
  const double h_ak = shannon_entropy(joint);
  return 2.0 * h_ak - shannon_entropy(pa) - shannon_entropy(pk);
}

TripartiteState random_tripartite(const Dims3& dims, std::size_t rank, std::uint64_t seed) {
  return TripartiteState(random_density(dims.total(), rank, seed), dims);
}

Decomposition random_decomposition(std::size_t d_b, std::uint64_t seed) {
  Rng rng(seed, 0);
  const auto shapes = enumerate_shapes(d_b, 2 * d_b);
  std::vector<SummandShape> pick = shapes[rng.index(shapes.size())];
  return Decomposition(pick, random_haar_isometry(d_b, total_dim(pick), split_seed(seed, 1)));
}

MarkovState random_markov_state(std::size_t d_a, std::size_t d_c, std::vector<SummandShape> shapes,
                                std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    weights.push_back(rng.uniform(0.1, 1.0));
    total += weights.back();
  }
  for (double& w : weights) w /= total;
  std::vector<ComplexMatrix> left, right;
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    const std::size_t dl = d_a * shapes[j].left, dr = shapes[j].right * d_c;
    left.push_back(random_density(dl, 1 + rng.index(dl), split_seed(seed, 2 * j + 1)));
    right.push_back(random_density(dr, 1 + rng.index(dr), split_seed(seed, 2 * j + 2)));
  }
  const std::size_t n = total_dim(shapes);
  Decomposition d(shapes, ComplexMatrix::identity(n));
  return MarkovState(std::move(weights), std::move(left), std::move(right), std::move(d), d_a, d_c);
}

TripartiteState hidden_markov_state(std::size_t d_a, std::size_t d_c,
                                    std::vector<SummandShape> shapes, std::uint64_t seed) {
  const TripartiteState mu = assemble(random_markov_state(d_a, d_c, std::move(shapes), seed));
  const std::size_t n = mu.dims().b;
  return apply_isometry(mu, random_haar_isometry(n, n, split_seed(seed, 99)), 1);
}

}  // namespace qmc
