#include "qmc/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"

namespace qmc {

std::size_t total_dim(std::span<const SummandShape> summands) {
  std::size_t n = 0;
  for (const SummandShape& s : summands) n += s.size();
  return n;
}

std::vector<std::size_t> block_offsets(std::span<const SummandShape> summands) {
  std::vector<std::size_t> off(summands.size());
  std::size_t n = 0;
  for (std::size_t j = 0; j < summands.size(); ++j) {
    off[j] = n;
    n += summands[j].size();
  }
  return off;
}

Decomposition::Decomposition(std::vector<SummandShape> summands, ComplexMatrix isometry)
    : summands_(std::move(summands)), isometry_(std::move(isometry)) {
  const std::size_t d_b = isometry_.cols();
  if (summands_.empty()) throw DimensionError("Decomposition: no summands");
  if (summands_.size() > d_b * d_b)
    throw DimensionError("Decomposition: " + std::to_string(summands_.size()) +
                         " summands exceed d_B^2 = " + std::to_string(d_b * d_b));
  for (const SummandShape& s : summands_)
    if (s.left == 0 || s.right == 0 || s.left > d_b || s.right > d_b)
      throw DimensionError("Decomposition: summand factor dimensions must lie in [1, d_B]");
  if (total_dim(summands_) != isometry_.rows())
    throw DimensionError("Decomposition: isometry has " + std::to_string(isometry_.rows()) +
                         " rows, summands span " + std::to_string(total_dim(summands_)));
  if (isometry_defect(isometry_) > kIsometryTol)
    throw ValidationError("Decomposition: W^dagger W differs from the identity");
  offsets_ = block_offsets(summands_);
}

Decomposition Decomposition::canonical(std::size_t input_dim, std::vector<SummandShape> summands) {
  const std::size_t n = total_dim(summands);
  if (input_dim == 0 || n < input_dim)
    throw DimensionError("Decomposition::canonical: summands cannot hold the input space");
  // slot order: block, then r, then l
  std::vector<std::size_t> slots;
  slots.reserve(n);
  const std::vector<std::size_t> off = block_offsets(summands);
  for (std::size_t j = 0; j < summands.size(); ++j)
    for (std::size_t r = 0; r < summands[j].right; ++r)
      for (std::size_t l = 0; l < summands[j].left; ++l)
        slots.push_back(off[j] + l * summands[j].right + r);
  ComplexMatrix w(n, input_dim);
  for (std::size_t b = 0; b < input_dim; ++b) w(slots[b], b) = 1.0;
  return Decomposition(std::move(summands), std::move(w));
}

MarkovState::MarkovState(std::vector<double> weights, std::vector<ComplexMatrix> left,
                         std::vector<ComplexMatrix> right, Decomposition decomposition,
                         std::size_t d_a, std::size_t d_c)
    : weights_(std::move(weights)),
      left_(std::move(left)),
      right_(std::move(right)),
      decomposition_(std::move(decomposition)),
      d_a_(d_a),
      d_c_(d_c) {
  const auto& shapes = decomposition_.summands();
  if (weights_.size() != shapes.size() || left_.size() != shapes.size() ||
      right_.size() != shapes.size())
    throw DimensionError("MarkovState: component count differs from summand count");
  double sum = 0.0;
  for (double q : weights_) {
    if (!(q >= 0.0)) throw ValidationError("MarkovState: negative weight");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw ValidationError("MarkovState: weights do not sum to 1");
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    if (left_[j].rows() != d_a_ * shapes[j].left || right_[j].rows() != shapes[j].right * d_c_)
      throw DimensionError("MarkovState: component " + std::to_string(j) +
                           " does not match its summand shape");
    require_density_matrix(left_[j], "MarkovState left component");
    require_density_matrix(right_[j], "MarkovState right component");
  }
}

TripartiteState assemble(const MarkovState& m) {
  const Decomposition& d = m.decomposition();
  const std::size_t n = d.embedded_dim();
  const std::size_t da = m.d_a();
  const std::size_t dc = m.d_c();
  ComplexMatrix out(da * n * dc, da * n * dc);
  for (std::size_t j = 0; j < d.summands().size(); ++j) {
    const double q = m.weights()[j];
    if (q == 0.0) continue;
    const SummandShape s = d.summands()[j];
    const ComplexMatrix block = kron(m.left()[j], m.right()[j]);  // (a, l, r, c)
    const std::size_t inner = s.size() * dc;
    for (std::size_t x = 0; x < block.rows(); ++x) {
      const std::size_t a = x / inner;
      const std::size_t gx = (a * n + d.offset(j) + (x % inner) / dc) * dc + x % dc;
      for (std::size_t y = 0; y < block.cols(); ++y) {
        const std::size_t a2 = y / inner;
        const std::size_t gy = (a2 * n + d.offset(j) + (y % inner) / dc) * dc + y % dc;
        out(gx, gy) = q * block(x, y);
      }
    }
  }
  return TripartiteState(std::move(out), Dims3{da, n, dc});
}

namespace {

ComplexMatrix embedded_matrix(const TripartiteState& rho, const Decomposition& d) {
  if (d.input_dim() != rho.dims().b)
    throw DimensionError("decomposition input dimension differs from d_B");
  const std::vector<std::size_t> dims = rho.dims().list();
  return apply_isometry(rho.matrix(), dims, d.isometry(), 1);
}

// Indices of block j of the embedded space, ordered (a, l, r, c).
std::vector<std::size_t> block_indices(const Dims3& dims, const Decomposition& d, std::size_t j) {
  const std::size_t n = d.embedded_dim();
  const std::size_t size = d.summands()[j].size();
  std::vector<std::size_t> idx;
  idx.reserve(dims.a * size * dims.c);
  for (std::size_t a = 0; a < dims.a; ++a)
    for (std::size_t s = 0; s < size; ++s)
      for (std::size_t c = 0; c < dims.c; ++c) idx.push_back((a * n + d.offset(j) + s) * dims.c + c);
  return idx;
}

ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<std::size_t>& idx) {
  ComplexMatrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = m(idx[i], idx[k]);
  return out;
}

ComplexMatrix maximally_mixed(std::size_t n) {
  ComplexMatrix m = ComplexMatrix::identity(n);
  m *= 1.0 / static_cast<double>(n);
  return m;
}

}  // namespace

BlockProjection project_omega_delta(const TripartiteState& rho, const Decomposition& d) {
  const ComplexMatrix embedded = embedded_matrix(rho, d);
  BlockProjection out;
  for (std::size_t j = 0; j < d.summands().size(); ++j) {
    ComplexMatrix block = submatrix(embedded, block_indices(rho.dims(), d, j));
    const double q = std::max(block.trace().real(), 0.0);
    out.weights.push_back(q);
    if (q < kBlockWeightTol) {
      out.blocks.push_back(maximally_mixed(block.rows()));
    } else {
      block *= 1.0 / q;
      out.blocks.push_back(std::move(block));
    }
  }
  return out;
}

ComplexMatrix omega_delta(const TripartiteState& rho, const Decomposition& d) {
  ComplexMatrix out = embedded_matrix(rho, d);
  const std::size_t n = d.embedded_dim();
  const std::size_t dc = rho.dims().c;
  std::vector<std::size_t> block_of(n);
  for (std::size_t j = 0; j < d.summands().size(); ++j)
    for (std::size_t s = 0; s < d.summands()[j].size(); ++s) block_of[d.offset(j) + s] = j;
  for (std::size_t x = 0; x < out.rows(); ++x)
    for (std::size_t y = 0; y < out.cols(); ++y)
      if (block_of[(x / dc) % n] != block_of[(y / dc) % n]) out(x, y) = 0.0;
  return out;
}

MarkovState optimal_markov_for_decomposition(const TripartiteState& rho, const Decomposition& d) {
  const BlockProjection proj = project_omega_delta(rho, d);
  std::vector<ComplexMatrix> left, right;
  for (std::size_t j = 0; j < d.summands().size(); ++j) {
    const SummandShape s = d.summands()[j];
    const std::size_t dims[] = {rho.dims().a, s.left, s.right, rho.dims().c};
    const std::size_t keep_left[] = {0, 1};
    const std::size_t keep_right[] = {2, 3};
    left.push_back(partial_trace(proj.blocks[j], dims, keep_left));
    right.push_back(partial_trace(proj.blocks[j], dims, keep_right));
  }
  // Renormalize the weights so that rounding cannot break the sum-to-one check.
  std::vector<double> q = proj.weights;
  const double sum = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& v : q) v /= sum;
  return MarkovState(std::move(q), std::move(left), std::move(right), d, rho.dims().a,
                     rho.dims().c);
}

FactoredState::FactoredState(const TripartiteState& rho) : dims(rho.dims()) {
  const EigenSystem es = hermitian_eig(rho.matrix());
  entropy = shannon_entropy(es.values);
  const std::size_t n = rho.matrix().rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (es.values[k] <= 1e-15) continue;
    const double s = std::sqrt(es.values[k]);
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = s * es.vectors(i, k);
    vectors.push_back(std::move(v));
  }
}

FactoredState::FactoredState(const PureState& psi) {
  if (psi.dims().size() != 3) throw DimensionError("FactoredState: pure state must be tripartite");
  dims = Dims3{psi.dims()[0], psi.dims()[1], psi.dims()[2]};
  vectors.emplace_back(psi.amplitudes().begin(), psi.amplitudes().end());
  entropy = 0.0;
}

double relent_formula(const FactoredState& rho, const ComplexMatrix& w,
                      std::span<const SummandShape> summands) {
  const std::size_t da = rho.dims.a, db = rho.dims.b, dc = rho.dims.c;
  const std::size_t n = w.rows();
  if (w.cols() != db || total_dim(summands) != n)
    throw DimensionError("relent_formula: isometry shape does not match state or summands");
  const std::vector<std::size_t> off = block_offsets(summands);

  std::vector<ComplexMatrix> sigma, chi;
  for (const SummandShape& s : summands) {
    sigma.emplace_back(da * s.left, da * s.left);
    chi.emplace_back(s.right * dc, s.right * dc);
  }
  std::vector<cplx> t(da * n * dc);
  for (const std::vector<cplx>& v : rho.vectors) {
    // t(a, m, c) = sum_b W(m, b) v(a, b, c)
    std::fill(t.begin(), t.end(), cplx{});
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t b = 0; b < db; ++b) {
          const cplx wmb = w(m, b);
          if (wmb == cplx{}) continue;
          const cplx* src = &v[(a * db + b) * dc];
          cplx* dst = &t[(a * n + m) * dc];
          for (std::size_t c = 0; c < dc; ++c) dst[c] += wmb * src[c];
        }
    for (std::size_t j = 0; j < summands.size(); ++j) {
      const std::size_t dl = summands[j].left, dr = summands[j].right;
      // block entry M(a l, r c) = t(a, off + l dr + r, c)
      auto at = [&](std::size_t a, std::size_t l, std::size_t r, std::size_t c) -> const cplx& {
        return t[(a * n + off[j] + l * dr + r) * dc + c];
      };
      ComplexMatrix& sg = sigma[j];
      for (std::size_t a = 0; a < da; ++a)
        for (std::size_t l = 0; l < dl; ++l)
          for (std::size_t a2 = 0; a2 < da; ++a2)
            for (std::size_t l2 = 0; l2 < dl; ++l2) {
              cplx s = 0.0;
              for (std::size_t r = 0; r < dr; ++r)
                for (std::size_t c = 0; c < dc; ++c) s += at(a, l, r, c) * std::conj(at(a2, l2, r, c));
              sg(a * dl + l, a2 * dl + l2) += s;
            }
      ComplexMatrix& ch = chi[j];
      for (std::size_t r = 0; r < dr; ++r)
        for (std::size_t c = 0; c < dc; ++c)
          for (std::size_t r2 = 0; r2 < dr; ++r2)
            for (std::size_t c2 = 0; c2 < dc; ++c2) {
              cplx s = 0.0;
              for (std::size_t a = 0; a < da; ++a)
                for (std::size_t l = 0; l < dl; ++l) s += at(a, l, r, c) * std::conj(at(a, l, r2, c2));
              ch(r * dc + c, r2 * dc + c2) += s;
            }
    }
  }

  // -S(rho) + sum_j q_j log q_j + sum_j (H(sigma_j) + H(chi_j)) on unnormalized blocks
  double value = -rho.entropy;
  for (std::size_t j = 0; j < summands.size(); ++j) {
    const double q = sigma[j].trace().real();
    if (q < kBlockWeightTol) continue;
    value += q * std::log2(q);
    value += spectrum_entropy_unnormalized(hermitian_eigenvalues(sigma[j]));
    value += spectrum_entropy_unnormalized(hermitian_eigenvalues(chi[j]));
  }
  return value;
}

double relent_via_formula(const TripartiteState& rho, const Decomposition& d) {
  if (d.input_dim() != rho.dims().b)
    throw DimensionError("relent_via_formula: decomposition input dimension differs from d_B");
  return relent_formula(FactoredState(rho), d.isometry(), d.summands());
}

double relent_compact_form(const TripartiteState& rho, const Decomposition& d) {
  const ComplexMatrix embedded = embedded_matrix(rho, d);
  const auto& shapes = d.summands();
  const std::size_t k = shapes.size();
  std::size_t lmax = 1, rmax = 1;
  for (const SummandShape& s : shapes) {
    lmax = std::max(lmax, s.left);
    rmax = std::max(rmax, s.right);
  }
  const Dims3 dm = rho.dims();
  const std::size_t n = d.embedded_dim();
  const std::vector<std::size_t> odims = {k, dm.a, lmax, rmax, dm.c};
  const std::size_t side = product(odims);
  ComplexMatrix omega(side, side);
  auto o_index = [&](std::size_t j, std::size_t a, std::size_t l, std::size_t r, std::size_t c) {
    return (((j * dm.a + a) * lmax + l) * rmax + r) * dm.c + c;
  };
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t dl = shapes[j].left, dr = shapes[j].right;
    for (std::size_t a = 0; a < dm.a; ++a)
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t r = 0; r < dr; ++r)
          for (std::size_t c = 0; c < dm.c; ++c) {
            const std::size_t x = (a * n + d.offset(j) + l * dr + r) * dm.c + c;
            const std::size_t ox = o_index(j, a, l, r, c);
            for (std::size_t a2 = 0; a2 < dm.a; ++a2)
              for (std::size_t l2 = 0; l2 < dl; ++l2)
                for (std::size_t r2 = 0; r2 < dr; ++r2)
                  for (std::size_t c2 = 0; c2 < dm.c; ++c2) {
                    const std::size_t y = (a2 * n + d.offset(j) + l2 * dr + r2) * dm.c + c2;
                    omega(ox, o_index(j, a2, l2, r2, c2)) = embedded(x, y);
                  }
          }
  }
  const std::size_t j_only[] = {0};
  const std::size_t j_a_l[] = {0, 1, 2};
  const std::size_t j_r_c[] = {0, 3, 4};
  const double s_j = subsystem_entropy(omega, odims, j_only);
  return -von_neumann_entropy(rho.matrix()) + s_j +
         (subsystem_entropy(omega, odims, j_a_l) - s_j) +
         (subsystem_entropy(omega, odims, j_r_c) - s_j);
}

double relent_direct(const TripartiteState& rho, const Decomposition& d) {
  const TripartiteState mu = assemble(optimal_markov_for_decomposition(rho, d));
  const EntropyReport r = quantum_relative_entropy(embedded_matrix(rho, d), mu.matrix());
  return r.value;
}

TwoRelents two_relents_identity(const TripartiteState& rho, const Decomposition& d) {
  TwoRelents out{};
  out.lhs = relent_via_formula(rho, d);
  out.term1 = quantum_relative_entropy(embedded_matrix(rho, d), omega_delta(rho, d)).value;
  const BlockProjection proj = project_omega_delta(rho, d);
  out.term2 = 0.0;
  for (std::size_t j = 0; j < proj.weights.size(); ++j) {
    if (proj.weights[j] < kBlockWeightTol) continue;
    const SummandShape s = d.summands()[j];
    const std::size_t dims[] = {rho.dims().a, s.left, s.right, rho.dims().c};
    const std::size_t x[] = {0, 1};
    const std::size_t y[] = {2, 3};
    out.term2 += proj.weights[j] * mutual_information(proj.blocks[j], dims, x, y);
  }
  return out;
}

}  // namespace qmc
