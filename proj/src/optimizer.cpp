#include "qmc/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"
#include "qmc/nelder_mead.hpp"
#include "qmc/random.hpp"

namespace qmc {

void OptConfig::validate() const {
  if (restarts == 0) throw ValidationError("OptConfig: restarts must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("OptConfig: tol must be positive");
  if (!(simplex_scale > 0.0)) throw ValidationError("OptConfig: simplex_scale must be positive");
  if (max_input_dim == 0) throw ValidationError("OptConfig: max_input_dim must be positive");
}

// ---------------------------------------------------------------------------------------
// IsometryChart

IsometryChart::IsometryChart(const ComplexMatrix& start, std::size_t input_dim)
    : base_(start.rows(), start.rows()), input_dim_(input_dim) {
  const std::size_t n = start.rows();
  if (start.cols() != input_dim || input_dim > n)
    throw DimensionError("IsometryChart: start must be an N x d isometry with d <= N");
  // Complete the start columns to a unitary with the standard basis.
  ComplexMatrix cols(n, input_dim + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < input_dim; ++c) cols(i, c) = start(i, c);
    cols(i, input_dim + i) = 1.0;
  }
  gram_schmidt(cols, 1e-8);
  std::size_t filled = 0;
  for (std::size_t c = 0; c < cols.cols() && filled < n; ++c) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(cols(i, c));
    if (norm < 0.5) continue;
    for (std::size_t i = 0; i < n; ++i) base_(i, filled) = cols(i, c);
    ++filled;
  }
  if (filled != n) throw ValidationError("IsometryChart: start columns are not orthonormal");
}

std::size_t IsometryChart::parameter_count() const noexcept {
  const std::size_t d = input_dim_;
  return d * d + 2 * d * (base_.rows() - d);
}

ComplexMatrix IsometryChart::isometry(std::span<const double> theta) const {
  const std::size_t d = input_dim_;
  const std::size_t n = base_.rows();
  const std::size_t m = n - d;
  if (theta.size() != parameter_count()) throw DimensionError("IsometryChart: wrong parameter count");

  std::size_t idx = 0;
  ComplexMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) a(i, i) = theta[idx++];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const cplx z(theta[idx], theta[idx + 1]);
      idx += 2;
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }

  ComplexMatrix local(n, d);
  if (m == 0) {
    local = expi_hermitian(a);
  } else {
    // H = [[A, K^dagger], [K, 0]] acts on span{e_1..e_d, Q}, K = Q R, as [[A, R^dagger], [R, 0]].
    ComplexMatrix q(m, d);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < d; ++c) {
        q(i, c) = cplx(theta[idx], theta[idx + 1]);
        idx += 2;
      }
    const ComplexMatrix r = gram_schmidt(q);
    ComplexMatrix small(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        small(i, j) = a(i, j);
        small(d + i, j) = r(i, j);
        small(j, d + i) = std::conj(r(i, j));
      }
    const ComplexMatrix e = expi_hermitian(small);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t c = 0; c < d; ++c) local(i, c) = e(i, c);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < d; ++c) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += q(i, k) * e(d + k, c);
        local(d + i, c) = s;
      }
  }
  return base_ * local;
}

// ---------------------------------------------------------------------------------------
// Shape lists

std::vector<std::vector<SummandShape>> enumerate_shapes(std::size_t d_b, std::size_t max_total) {
  std::vector<SummandShape> types;
  for (std::size_t l = 1; l <= d_b; ++l)
    for (std::size_t r = 1; r <= d_b; ++r) types.push_back({l, r});
  std::stable_sort(types.begin(), types.end(), [](const SummandShape& x, const SummandShape& y) {
    return x.size() != y.size() ? x.size() < y.size() : x.left < y.left;
  });

  std::vector<std::vector<SummandShape>> out;
  std::vector<SummandShape> current;
  const std::size_t max_count = d_b * d_b;
  // multisets with type indices nonincreasing along the list
  std::function<void(std::size_t, std::size_t)> grow = [&](std::size_t top, std::size_t total) {
    if (total >= d_b && !current.empty()) out.push_back(current);
    if (current.size() == max_count) return;
    for (std::size_t t = top + 1; t-- > 0;) {
      if (total + types[t].size() > max_total) continue;
      current.push_back(types[t]);
      grow(t, total + types[t].size());
      current.pop_back();
    }
  };
  grow(types.size() - 1, 0);
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const std::size_t tx = total_dim(x), ty = total_dim(y);
    if (tx != ty) return tx < ty;
    return x.size() < y.size();
  });
  return out;
}

std::vector<std::vector<SummandShape>> candidate_shapes(std::size_t d_b, const OptConfig& cfg) {
  ShapeMode mode = cfg.shape_mode;
  if (mode == ShapeMode::trivial) return {{SummandShape{d_b, d_b}}};
  if (d_b > cfg.max_input_dim)
    throw DimensionError("dimension cap exceeded: d_B = " + std::to_string(d_b) +
                         " is above the configured maximum " + std::to_string(cfg.max_input_dim) +
                         " (use the trivial shape mode or raise the cap)");
  if (mode == ShapeMode::automatic) mode = d_b <= 3 ? ShapeMode::enumerate : ShapeMode::full;
  if (mode == ShapeMode::full)
    return {std::vector<SummandShape>(d_b * d_b, SummandShape{d_b, d_b})};
  const std::size_t max_total = cfg.max_embed_dim > 0 ? cfg.max_embed_dim : 2 * d_b;
  return enumerate_shapes(d_b, max_total);
}

std::size_t worker_count(const OptConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("QMC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs fn(0..count-1) on up to `threads` workers. Results land in caller-owned slots, so the
// outcome does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

using IsometryObjective = std::function<double(const ComplexMatrix&)>;

struct RestartOutcome {
  RestartTrace trace;
  ComplexMatrix isometry;
};

constexpr int kMaxPolishPasses = 4;

// Nelder-Mead in the chart around `start`, re-seeded from the incumbent until a pass stops
// improving by more than tol or the iteration budget runs out.
RestartOutcome optimize_isometry(const IsometryObjective& objective, const ComplexMatrix& start,
                                 const OptConfig& cfg) {
  const IsometryChart chart(start, start.cols());
  const Objective f = [&](std::span<const double> theta) {
    const double v = objective(chart.isometry(theta));
    return std::isfinite(v) ? v : 1e300;
  };
  std::vector<double> x(chart.parameter_count(), 0.0);
  RestartTrace trace;
  double best = f(x);
  for (int pass = 0; pass <= kMaxPolishPasses; ++pass) {
    if (trace.iterations >= cfg.max_iters && pass > 0) break;
    const NelderMeadResult res =
        nelder_mead(f, x, {cfg.simplex_scale, cfg.max_iters - trace.iterations, cfg.tol});
    trace.iterations += res.iterations;
    trace.history.insert(trace.history.end(), res.history.begin(), res.history.end());
    trace.converged = res.converged;
    const double gain = best - res.value;
    if (res.value <= best) {
      best = res.value;
      x = res.x;
    }
    if (!res.converged || (pass > 0 && gain < cfg.tol)) break;
  }
  trace.value = best;
  return {std::move(trace), chart.isometry(x)};
}

ComplexMatrix starting_isometry(std::size_t restart, std::size_t global_id, std::size_t d_b,
                                const std::vector<SummandShape>& shapes, std::uint64_t seed) {
  if (restart == 0) return Decomposition::canonical(d_b, shapes).isometry();
  return random_haar_isometry(d_b, total_dim(shapes), split_seed(seed, global_id));
}

// Deterministic fold: lowest value wins, ties go to the lower restart id.
std::size_t best_index(const std::vector<RestartOutcome>& outcomes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i)
    if (outcomes[i].trace.value < outcomes[best].trace.value) best = i;
  return best;
}

bool any_converged(const std::vector<RestartOutcome>& outcomes) {
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [](const RestartOutcome& o) { return o.trace.converged; });
}

// S(AE) of (1 (x) W (x) 1)|psi> with W: B -> E (x) F, |E| = |F| = d_B.
double purification_entropy(const PureState& psi, const ComplexMatrix& w) {
  const std::size_t da = psi.dims()[0], db = psi.dims()[1], dc = psi.dims()[2];
  const std::size_t n = db * db;
  const auto amp = psi.amplitudes();
  std::vector<cplx> t(da * n * dc);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t b = 0; b < db; ++b) {
        const cplx wmb = w(m, b);
        if (wmb == cplx{}) continue;
        for (std::size_t c = 0; c < dc; ++c) t[(a * n + m) * dc + c] += wmb * amp[(a * db + b) * dc + c];
      }
  ComplexMatrix sigma(da * db, da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t e = 0; e < db; ++e)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t e2 = 0; e2 < db; ++e2) {
          cplx s = 0.0;
          for (std::size_t f = 0; f < db; ++f)
            for (std::size_t c = 0; c < dc; ++c)
              s += t[(a * n + e * db + f) * dc + c] * std::conj(t[(a2 * n + e2 * db + f) * dc + c]);
          sigma(a * db + e, a2 * db + e2) = s;
        }
  return spectrum_entropy_unnormalized(hermitian_eigenvalues(sigma));
}

PureState require_tripartite(const PureState& psi) {
  if (psi.dims().size() != 3) throw DimensionError("expected a pure state over (d_A, d_B, d_C)");
  return psi;
}

}  // namespace

// ---------------------------------------------------------------------------------------
// Optimizers

OptResult minimize_delta(const TripartiteState& rho, const OptConfig& cfg) {
  cfg.validate();
  const std::size_t d_b = rho.dims().b;
  const std::vector<std::vector<SummandShape>> shapes = candidate_shapes(d_b, cfg);
  const FactoredState factored(rho);

  const double lower = conditional_mutual_information(rho);
  const std::size_t workers = worker_count(cfg);

  // Shapes run in order, restarts of one shape in parallel. Once the upper estimate sits
  // within tol of the lower bound nothing can improve on it, so later shapes are skipped.
  std::vector<RestartOutcome> outcomes;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    std::vector<RestartOutcome> batch(cfg.restarts);
    parallel_for(cfg.restarts, workers, [&](std::size_t r) {
      const std::size_t id = s * cfg.restarts + r;
      const IsometryObjective objective = [&](const ComplexMatrix& w) {
        return relent_formula(factored, w, shapes[s]);
      };
      batch[r] = optimize_isometry(objective, starting_isometry(r, id, d_b, shapes[s], cfg.seed), cfg);
      batch[r].trace.restart = id;
      batch[r].trace.shape_index = s;
    });
    for (RestartOutcome& o : batch) outcomes.push_back(std::move(o));
    if (outcomes[best_index(outcomes)].trace.value <= lower + cfg.tol) break;
  }

  const std::size_t best = best_index(outcomes);
  OptResult result{outcomes[best].trace.value,
                   Decomposition(shapes[outcomes[best].trace.shape_index], outcomes[best].isometry),
                   lower,
                   {},
                   any_converged(outcomes)};
  for (RestartOutcome& o : outcomes) result.trace.push_back(std::move(o.trace));
  return result;
}

OptResult minimize_ep_pure(const PureState& input, const OptConfig& cfg) {
  cfg.validate();
  const PureState psi = require_tripartite(input);
  const std::size_t d_b = psi.dims()[1];
  if (d_b > cfg.max_input_dim)
    throw DimensionError("dimension cap exceeded: purifying dimension " + std::to_string(d_b) +
                         " is above the configured maximum " + std::to_string(cfg.max_input_dim));
  const std::vector<SummandShape> shape{{d_b, d_b}};

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  parallel_for(cfg.restarts, worker_count(cfg), [&](std::size_t id) {
    const IsometryObjective objective = [&](const ComplexMatrix& w) {
      return purification_entropy(psi, w);
    };
    outcomes[id] = optimize_isometry(objective, starting_isometry(id, id, d_b, shape, cfg.seed), cfg);
    outcomes[id].trace.restart = id;
  });

  const std::size_t best = best_index(outcomes);
  OptResult result{outcomes[best].trace.value, Decomposition(shape, outcomes[best].isometry), 0.0,
                   {}, any_converged(outcomes)};
  for (RestartOutcome& o : outcomes) result.trace.push_back(std::move(o.trace));
  return result;
}

OptResult minimize_ep(const ComplexMatrix& rho_ac, std::size_t d_a, std::size_t d_c,
                      const OptConfig& cfg) {
  if (!rho_ac.is_square() || rho_ac.rows() != d_a * d_c)
    throw DimensionError("minimize_ep: matrix side does not match d_A * d_C");
  require_density_matrix(rho_ac, "minimize_ep");
  const EigenSystem es = hermitian_eig(rho_ac);
  std::size_t rank = 0;
  while (rank < es.values.size() && es.values[rank] > 1e-12) ++rank;
  rank = std::max<std::size_t>(rank, 1);
  if (rank > cfg.max_input_dim)
    throw DimensionError("dimension cap exceeded: rank " + std::to_string(rank) +
                         " is above the configured maximum " + std::to_string(cfg.max_input_dim));
  double norm = 0.0;
  for (std::size_t k = 0; k < rank; ++k) norm += std::max(es.values[k], 0.0);
  // purification over (A, purifier, C)
  std::vector<cplx> amp(d_a * rank * d_c);
  for (std::size_t a = 0; a < d_a; ++a)
    for (std::size_t k = 0; k < rank; ++k)
      for (std::size_t c = 0; c < d_c; ++c)
        amp[(a * rank + k) * d_c + c] =
            std::sqrt(std::max(es.values[k], 0.0) / norm) * es.vectors(a * d_c + c, k);
  return minimize_ep_pure(PureState(std::move(amp), {d_a, rank, d_c}), cfg);
}

namespace {

// Unnormalized outcome state (1 (x) V_j (x) 1)|psi>, V_j rows [j d_B, (j + 1) d_B) of v.
std::vector<cplx> outcome_vector(const PureState& psi, const ComplexMatrix& v, std::size_t j) {
  const std::size_t da = psi.dims()[0], db = psi.dims()[1], dc = psi.dims()[2];
  const auto amp = psi.amplitudes();
  std::vector<cplx> out(da * db * dc);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t bo = 0; bo < db; ++bo)
      for (std::size_t b = 0; b < db; ++b) {
        const cplx x = v(j * db + bo, b);
        if (x == cplx{}) continue;
        for (std::size_t c = 0; c < dc; ++c) out[(a * db + bo) * dc + c] += x * amp[(a * db + b) * dc + c];
      }
  return out;
}

constexpr std::size_t kInnerIters = 300;
constexpr std::size_t kOuterIters = 800;
constexpr std::size_t kOuterRestarts = 2;

struct MeasuredValue {
  double value = 0.0;
  std::vector<double> weights;
  std::vector<ComplexMatrix> purifications;  // W_j per outcome
};

MeasuredValue measured_value(const PureState& psi, const ComplexMatrix& v, std::size_t outcomes,
                             const OptConfig& inner) {
  const std::size_t db = psi.dims()[1];
  MeasuredValue out;
  double ep_sum = 0.0;
  for (std::size_t j = 0; j < outcomes; ++j) {
    std::vector<cplx> phi = outcome_vector(psi, v, j);
    double q = 0.0;
    for (const cplx& z : phi) q += std::norm(z);
    out.weights.push_back(q);
    if (q < kBlockWeightTol) {
      out.purifications.push_back(Decomposition::canonical(db, {{db, db}}).isometry());
      continue;
    }
    for (cplx& z : phi) z /= std::sqrt(q);
    const OptResult ep = minimize_ep_pure(PureState(std::move(phi), psi.dims()), inner);
    ep_sum += q * ep.value;
    out.purifications.push_back(ep.decomposition.isometry());
  }
  out.value = shannon_entropy(out.weights) + 2.0 * ep_sum;
  return out;
}

}  // namespace

OptResult pure_delta(const PureState& input, const OptConfig& cfg) {
  cfg.validate();
  const PureState psi = require_tripartite(input);
  const std::size_t d_b = psi.dims()[1];
  if (d_b > cfg.max_input_dim)
    throw DimensionError("dimension cap exceeded: d_B = " + std::to_string(d_b) +
                         " is above the configured maximum " + std::to_string(cfg.max_input_dim));
  const std::size_t max_total = cfg.max_embed_dim > 0 ? cfg.max_embed_dim : 2 * d_b;
  const std::size_t max_outcomes = std::max<std::size_t>(1, std::min(d_b * d_b, max_total / d_b));

  // Every outer evaluation runs one inner search per outcome, so both loops get small budgets.
  OptConfig inner = cfg;
  inner.restarts = 1;
  inner.max_iters = std::min<std::size_t>(cfg.max_iters, kInnerIters);
  inner.threads = 1;
  OptConfig outer = cfg;
  outer.max_iters = std::min<std::size_t>(cfg.max_iters, kOuterIters);

  // Task list: (outcome count, restart). One outcome needs no outer search.
  struct Task {
    std::size_t outcomes;
    std::size_t restart;
  };
  std::vector<Task> tasks{{1, 0}};
  for (std::size_t k = 2; k <= max_outcomes; ++k)
    for (std::size_t r = 0; r < std::min<std::size_t>(cfg.restarts, kOuterRestarts); ++r) tasks.push_back({k, r});

  struct Found {
    RestartTrace trace;
    Decomposition decomposition;
  };
  std::vector<std::optional<Found>> found(tasks.size());
  parallel_for(tasks.size(), worker_count(cfg), [&](std::size_t id) {
    const std::size_t k = tasks[id].outcomes;
    OptConfig inner_k = inner;
    inner_k.seed = split_seed(cfg.seed, 7919 + k);
    const std::vector<SummandShape> blocks(k, SummandShape{d_b, d_b});
    ComplexMatrix v(k * d_b, d_b);
    RestartTrace trace;
    if (k == 1) {
      v = ComplexMatrix::identity(d_b);
      trace.converged = true;
    } else {
      ComplexMatrix start(k * d_b, d_b);
      if (tasks[id].restart == 0) {
        // measure B in its own basis, basis vectors dealt round-robin to the outcomes
        for (std::size_t b = 0; b < d_b; ++b) start((b % k) * d_b + b / k, b) = 1.0;
      } else {
        start = random_haar_isometry(d_b, k * d_b, split_seed(cfg.seed, id));
      }
      const IsometryObjective objective = [&](const ComplexMatrix& w) {
        return measured_value(psi, w, k, inner_k).value;
      };
      RestartOutcome o = optimize_isometry(objective, start, outer);
      trace = std::move(o.trace);
      v = std::move(o.isometry);
    }
    const MeasuredValue mv = measured_value(psi, v, k, inner_k);
    ComplexMatrix w(k * d_b * d_b, d_b);
    for (std::size_t j = 0; j < k; ++j) {
      ComplexMatrix vj(d_b, d_b);
      for (std::size_t i = 0; i < d_b; ++i)
        for (std::size_t b = 0; b < d_b; ++b) vj(i, b) = v(j * d_b + i, b);
      const ComplexMatrix block = mv.purifications[j] * vj;
      for (std::size_t i = 0; i < d_b * d_b; ++i)
        for (std::size_t b = 0; b < d_b; ++b) w(j * d_b * d_b + i, b) = block(i, b);
    }
    trace.value = mv.value;
    trace.restart = id;
    trace.shape_index = k - 1;
    found[id] = Found{std::move(trace), Decomposition(blocks, std::move(w))};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < found.size(); ++i)
    if (found[i]->trace.value < found[best]->trace.value) best = i;
  const TripartiteState rho(psi.density(), Dims3{psi.dims()[0], d_b, psi.dims()[2]});
  OptResult result{found[best]->trace.value, found[best]->decomposition,
                   conditional_mutual_information(rho), {}, false};
  for (auto& f : found) {
    result.converged = result.converged || f->trace.converged;
    result.trace.push_back(std::move(f->trace));
  }
  return result;
}

OptResult pure_delta(const TripartiteState& rho, const OptConfig& cfg) {
  const EigenSystem es = hermitian_eig(rho.matrix());
  if (shannon_entropy(es.values) > 1e-8) throw ValidationError("pure_delta: input state is not pure");
  std::vector<cplx> amp(rho.matrix().rows());
  double norm = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    amp[i] = es.vectors(i, 0);
    norm += std::norm(amp[i]);
  }
  for (cplx& z : amp) z /= std::sqrt(norm);
  return pure_delta(PureState(std::move(amp), rho.dims().list()), cfg);
}

CertifiedGap certified_gap(const TripartiteState& rho, const OptConfig& cfg) {
  const OptResult r = minimize_delta(rho, cfg);
  return {r.lower_bound, r.value};
}

}  // namespace qmc
