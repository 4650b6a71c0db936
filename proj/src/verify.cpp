#include "qmc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "qmc/classical.hpp"
#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"
#include "qmc/families.hpp"
#include "qmc/markov.hpp"
#include "qmc/optimizer.hpp"
#include "qmc/random.hpp"

namespace qmc {

bool VerifyReport::ok() const {
  return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.failed == 0; });
}

void VerifyReport::print(std::ostream& out) const {
  for (const InvariantResult& r : results) {
    char worst[32];
    std::snprintf(worst, sizeof worst, "%.3e", r.worst);
    out << (r.failed == 0 ? "PASS " : "FAIL ") << r.suite << '/' << r.name << "  passed=" << r.passed
        << " failed=" << r.failed << " worst=" << worst << '\n';
  }
  out << (ok() ? "all invariants hold" : "some invariants failed") << '\n';
}

namespace {

// Collects checks of the form "violation <= 0".
class Tally {
 public:
  Tally(VerifyReport& report, std::string suite, std::string name) : report_(report) {
    result_.suite = std::move(suite);
    result_.name = std::move(name);
  }
  ~Tally() { report_.results.push_back(result_); }

  void check(double violation) {
    if (violation <= 0.0 && !std::isnan(violation)) {
      ++result_.passed;
    } else {
      ++result_.failed;
      result_.worst = std::isnan(violation) ? violation : std::max(result_.worst, violation);
    }
  }

 private:
  VerifyReport& report_;
  InvariantResult result_;
};

ComplexMatrix random_full_rank(std::size_t d, std::uint64_t seed) { return random_density(d, d, seed); }

// (1 - t) rho + t tau
ComplexMatrix mix(const ComplexMatrix& rho, const ComplexMatrix& tau, double t) {
  return rho * cplx(1.0 - t) + tau * cplx(t);
}

ClassicalJoint random_joint(std::size_t n, Rng& rng) {
  std::vector<double> t(n * n * n);
  double total = 0.0;
  for (double& v : t) {
    v = rng.uniform();
    total += v;
  }
  for (double& v : t) v /= total;
  return ClassicalJoint({n, n, n}, std::move(t));
}

ClassicalJoint random_markov_joint(const std::array<std::size_t, 3>& shape, Rng& rng) {
  const std::size_t nx = shape[0], ny = shape[1], nz = shape[2];
  std::vector<double> py(ny), px(nx * ny), pz(ny * nz);
  auto fill = [&](std::vector<double>& v, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += (v[r * cols + c] = rng.uniform(0.01, 1.0));
      for (std::size_t c = 0; c < cols; ++c) v[r * cols + c] /= s;
    }
  };
  fill(py, 1, ny);
  fill(px, ny, nx);
  fill(pz, ny, nz);
  std::vector<double> t(nx * ny * nz);
  double total = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z) total += (t[(x * ny + y) * nz + z] = py[y] * px[y * nx + x] * pz[y * nz + z]);
  for (double& v : t) v /= total;
  return ClassicalJoint(shape, std::move(t));
}

// rho (x) rho' with the factors regrouped as (A A', B B', C C').
TripartiteState regrouped_product(const TripartiteState& r1, const TripartiteState& r2) {
  const Dims3 d1 = r1.dims(), d2 = r2.dims();
  const ComplexMatrix big = kron(r1.matrix(), r2.matrix());
  const std::size_t n = big.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t a = 0; a < d1.a; ++a)
    for (std::size_t b = 0; b < d1.b; ++b)
      for (std::size_t c = 0; c < d1.c; ++c)
        for (std::size_t a2 = 0; a2 < d2.a; ++a2)
          for (std::size_t b2 = 0; b2 < d2.b; ++b2)
            for (std::size_t c2 = 0; c2 < d2.c; ++c2) {
              const std::size_t from = ((a * d1.b + b) * d1.c + c) * d2.total() + (a2 * d2.b + b2) * d2.c + c2;
              const std::size_t to =
                  (((a * d2.a + a2) * d1.b * d2.b) + (b * d2.b + b2)) * d1.c * d2.c + c * d2.c + c2;
              perm[from] = to;
            }
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(perm[i], perm[j]) = big(i, j);
  return TripartiteState(std::move(out), Dims3{d1.a * d2.a, d1.b * d2.b, d1.c * d2.c});
}

void entropy_suite(VerifyReport& report, std::uint64_t seed) {
  Rng rng(seed, 1);
  {
    Tally t(report, "entropy", "entropy_in_range");
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t d = 2 + rng.index(5);
      const double s = von_neumann_entropy(random_density(d, 1 + rng.index(d), split_seed(seed, 100 + i)));
      t.check(std::max(-s - 1e-12, s - std::log2(static_cast<double>(d)) - 1e-9));
    }
  }
  {
    Tally t(report, "entropy", "relative_entropy_nonnegative");
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t d = 2 + rng.index(3);
      const ComplexMatrix rho = random_density(d, 1 + rng.index(d), split_seed(seed, 200 + i));
      const ComplexMatrix sigma = random_full_rank(d, split_seed(seed, 300 + i));
      t.check(-quantum_relative_entropy(rho, sigma).value - 1e-9);
      t.check(std::abs(quantum_relative_entropy(sigma, sigma).value) - 1e-9);
    }
  }
  {
    Tally t(report, "entropy", "strong_subadditivity");
    for (std::size_t i = 0; i < 200; ++i) {
      const TripartiteState rho = random_tripartite({2, 2, 2}, 1 + rng.index(8), split_seed(seed, 400 + i));
      t.check(-conditional_mutual_information(rho) - 1e-9);
    }
  }
  {
    Tally t(report, "entropy", "cmi_additive_on_products");
    for (std::size_t i = 0; i < 10; ++i) {
      const TripartiteState r1 = random_tripartite({2, 2, 2}, 1 + rng.index(8), split_seed(seed, 600 + i));
      const TripartiteState r2 = random_tripartite({2, 1, 2}, 1 + rng.index(4), split_seed(seed, 700 + i));
      const double joint = conditional_mutual_information(regrouped_product(r1, r2));
      const double sum = conditional_mutual_information(r1) + conditional_mutual_information(r2);
      t.check(std::abs(joint - sum) - 1e-9);
    }
  }
  {
    Tally t(report, "entropy", "unitary_invariance");
    for (std::size_t i = 0; i < 50; ++i) {
      const std::size_t d = 2 + rng.index(4);
      const ComplexMatrix rho = random_density(d, 1 + rng.index(d), split_seed(seed, 800 + i));
      const ComplexMatrix u = random_haar_isometry(d, d, split_seed(seed, 900 + i));
      t.check(std::abs(von_neumann_entropy(u * rho * u.adjoint()) - von_neumann_entropy(rho)) - 1e-10);
    }
  }
  {
    Tally t(report, "entropy", "fannes");
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t d = 2 + rng.index(4);
      const ComplexMatrix rho = random_density(d, 1 + rng.index(d), split_seed(seed, 1000 + i));
      const ComplexMatrix tau = random_density(d, 1 + rng.index(d), split_seed(seed, 1100 + i));
      const ComplexMatrix sigma = mix(rho, tau, rng.uniform(0.001, 0.15));
      const double eps = trace_norm(rho - sigma);
      if (eps <= 0.0) continue;
      const double gap = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
      t.check(gap - fannes_bound(eps, d) - 1e-12);
    }
  }
  {
    Tally t(report, "entropy", "alicki_fannes");
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t da = 2, db = 2 + rng.index(2);
      const std::size_t dims[] = {da, db};
      const std::size_t a[] = {0}, b[] = {1};
      const ComplexMatrix rho = random_density(da * db, 1 + rng.index(da * db), split_seed(seed, 1200 + i));
      const ComplexMatrix tau = random_density(da * db, 1 + rng.index(da * db), split_seed(seed, 1300 + i));
      const ComplexMatrix sigma = mix(rho, tau, rng.uniform(0.001, 0.5));
      const double eps = trace_norm(rho - sigma);
      if (eps <= 0.0 || eps > 1.0) continue;
      const double gap = std::abs(conditional_entropy(rho, dims, a, b) - conditional_entropy(sigma, dims, a, b));
      t.check(gap - alicki_fannes_bound(eps, da) - 1e-12);
    }
  }
  {
    Tally t(report, "entropy", "pinsker");
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t d = 2 + rng.index(3);
      const ComplexMatrix rho = random_full_rank(d, split_seed(seed, 1400 + i));
      const ComplexMatrix sigma = random_full_rank(d, split_seed(seed, 1500 + i));
      t.check(pinsker_floor(rho, sigma) - quantum_relative_entropy(rho, sigma).value - 1e-12);
    }
  }
  {
    Tally t(report, "entropy", "nearest_pure_distance");
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t d = 2 + rng.index(3);
      const ComplexMatrix psi = random_density(d, 1, split_seed(seed, 1600 + i));
      const ComplexMatrix tau = random_density(d, d, split_seed(seed, 1700 + i));
      const ComplexMatrix rho = mix(psi, tau, rng.uniform(0.0, 0.05));
      const double s = von_neumann_entropy(rho);
      if (s > 0.5) continue;
      t.check(nearest_pure(rho).distance - 2.0 * s - 1e-12);
    }
  }
}

void classical_suite(VerifyReport& report, std::uint64_t seed) {
  Rng rng(seed, 2);
  std::vector<ClassicalJoint> joints;
  for (std::size_t i = 0; i < 200; ++i) joints.push_back(random_joint(i % 2 == 0 ? 2 : 3, rng));
  {
    Tally t(report, "classical", "relative_entropy_equals_cmi");
    for (const ClassicalJoint& p : joints) {
      const EntropyReport d = classical_relative_entropy(p, closest_markov(p));
      t.check(d.finite ? std::abs(d.value - classical_cmi(p)) - 1e-10 : 1.0);
    }
  }
  {
    Tally t(report, "classical", "projection_is_markov");
    for (const ClassicalJoint& p : joints) t.check(classical_cmi(closest_markov(p)) - 1e-12);
  }
  {
    Tally t(report, "classical", "projection_idempotent");
    for (const ClassicalJoint& p : joints) {
      const ClassicalJoint q = closest_markov(p);
      const ClassicalJoint qq = closest_markov(q);
      double diff = 0.0;
      for (std::size_t k = 0; k < q.table().size(); ++k) diff = std::max(diff, std::abs(q.table()[k] - qq.table()[k]));
      t.check(diff - 1e-12);
    }
  }
  {
    Tally t(report, "classical", "projection_minimal");
    for (std::size_t i = 0; i < 20; ++i) {
      const ClassicalJoint& p = joints[i];
      const double best = classical_relative_entropy(p, closest_markov(p)).value;
      for (std::size_t k = 0; k < 50; ++k) {
        const EntropyReport other = classical_relative_entropy(p, random_markov_joint(p.shape(), rng));
        t.check(other.finite ? best - other.value - 1e-12 : -1.0);
      }
    }
  }
}

void markov_suite(VerifyReport& report, std::uint64_t seed) {
  Rng rng(seed, 3);
  const std::vector<std::vector<SummandShape>> markov_shapes = {
      {{2, 1}}, {{1, 2}}, {{1, 1}, {1, 1}}, {{2, 1}, {1, 1}}, {{1, 2}, {1, 1}}, {{2, 2}}, {{2, 1}, {1, 2}}};
  {
    Tally t(report, "markov", "assembled_state_is_markov");
    for (std::size_t i = 0; i < 20; ++i) {
      const auto& shapes = markov_shapes[i % markov_shapes.size()];
      t.check(conditional_mutual_information(assemble(random_markov_state(2, 2, shapes, split_seed(seed, 2000 + i)))) - 1e-8);
    }
  }
  std::vector<TripartiteState> states;
  std::vector<Decomposition> decs;
  for (std::size_t i = 0; i < 20; ++i) {
    states.push_back(random_tripartite({2, 2, 2}, 1 + rng.index(8), split_seed(seed, 2100 + i)));
    decs.push_back(random_decomposition(2, split_seed(seed, 2200 + i)));
  }
  {
    Tally t(report, "markov", "evaluation_routes_agree");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double f = relent_via_formula(states[i], decs[i]);
      const double c = relent_compact_form(states[i], decs[i]);
      const double d = relent_direct(states[i], decs[i]);
      t.check(std::max(std::abs(f - c), std::abs(f - d)) - 1e-8);
    }
  }
  {
    Tally t(report, "markov", "two_relents_identity");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const TwoRelents r = two_relents_identity(states[i], decs[i]);
      t.check(std::abs(r.lhs - r.term1 - r.term2) - 1e-8);
    }
  }
  {
    Tally t(report, "markov", "relent_above_cmi");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double cmi = conditional_mutual_information(states[i]);
      for (std::size_t k = 0; k < 5; ++k) {
        const Decomposition d = random_decomposition(2, split_seed(seed, 2300 + 5 * i + k));
        t.check(cmi - relent_via_formula(states[i], d) - 1e-8);
      }
    }
  }
  {
    Tally t(report, "markov", "block_weights_normalized");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const BlockProjection p = project_omega_delta(states[i], decs[i]);
      double s = 0.0;
      for (double q : p.weights) s += q;
      t.check(std::abs(s - 1.0) - 1e-10);
    }
  }
}

void optimizer_suite(VerifyReport& report, std::uint64_t seed) {
  OptConfig cfg;
  cfg.restarts = 2;
  cfg.max_iters = 400;
  cfg.seed = seed;
  cfg.shape_mode = ShapeMode::trivial;
  std::vector<TripartiteState> states;
  std::vector<OptResult> results;
  for (std::size_t i = 0; i < 4; ++i) {
    states.push_back(random_tripartite({2, 2, 2}, 1 + i * 2, split_seed(seed, 3000 + i)));
    results.push_back(minimize_delta(states.back(), cfg));
  }
  {
    Tally t(report, "optimizer", "upper_above_lower");
    for (const OptResult& r : results) t.check(r.lower_bound - r.value - 1e-6);
  }
  {
    Tally t(report, "optimizer", "value_is_feasible");
    for (std::size_t i = 0; i < states.size(); ++i)
      t.check(std::abs(relent_via_formula(states[i], results[i].decomposition) - results[i].value) - 1e-8);
  }
  {
    Tally t(report, "optimizer", "traces_nonincreasing");
    for (const OptResult& r : results)
      for (const RestartTrace& tr : r.trace) {
        double worst = 0.0;
        for (std::size_t k = 1; k < tr.history.size(); ++k) worst = std::max(worst, tr.history[k] - tr.history[k - 1]);
        t.check(worst);
      }
  }
  {
    Tally t(report, "optimizer", "deterministic");
    const OptResult again = minimize_delta(states.front(), cfg);
    t.check(again.value == results.front().value ? 0.0 : std::abs(again.value - results.front().value));
  }
}

}  // namespace

bool is_known_suite(const std::string& suite) {
  return suite == "entropy" || suite == "classical" || suite == "markov" || suite == "optimizer" || suite == "all";
}

VerifyReport run_verify(const std::string& suite, std::uint64_t seed) {
  if (!is_known_suite(suite)) throw ValidationError("unknown suite '" + suite + "'");
  VerifyReport report;
  const bool all = suite == "all";
  if (all || suite == "entropy") entropy_suite(report, seed);
  if (all || suite == "classical") classical_suite(report, seed);
  if (all || suite == "markov") markov_suite(report, seed);
  if (all || suite == "optimizer") optimizer_suite(report, seed);
  return report;
}

}  // namespace qmc
