#include <doctest.h>

#include <cmath>

#include "qmc/classical.hpp"
#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"
#include "qmc/families.hpp"
#include "qmc/markov.hpp"
#include "qmc/random.hpp"

using namespace qmc;

namespace {

const std::size_t kDims[] = {2, 2, 2};

TripartiteState random_state(std::uint64_t seed) { return random_tripartite({2, 2, 2}, 1 + seed % 8, seed); }

// Block label of each slot of the direct sum.
std::vector<std::size_t> slot_blocks(const Decomposition& d) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < d.summands().size(); ++j)
    for (std::size_t k = 0; k < d.summands()[j].size(); ++k) out.push_back(j);
  return out;
}

}  // namespace

TEST_SUITE("markov") {
TEST_CASE("decomposition caps and isometry check") {
  CHECK_NOTHROW(Decomposition::canonical(2, {{2, 2}}));
  CHECK_THROWS_AS(Decomposition::canonical(2, {{3, 1}}), DimensionError);
  CHECK_THROWS_AS(Decomposition::canonical(1, {{1, 1}, {1, 1}}), DimensionError);
  CHECK_THROWS_AS(Decomposition::canonical(3, {{1, 1}}), DimensionError);
  ComplexMatrix w(2, 2);
  w(0, 0) = 1.0;
  CHECK_THROWS_AS(Decomposition({{1, 1}, {1, 1}}, w), ValidationError);
  const Decomposition c = Decomposition::canonical(2, {{2, 2}});
  CHECK(c.embedded_dim() == 4);
  // b^L = B, b^R trivial: slot l * right + r with r = 0
  CHECK(c.isometry()(0, 0) == cplx(1.0));
  CHECK(c.isometry()(2, 1) == cplx(1.0));
}

TEST_CASE("trivial decomposition leaves the state alone") {
  const TripartiteState rho = random_state(3);
  const Decomposition trivial = Decomposition::canonical(2, {{2, 1}});
  const BlockProjection p = project_omega_delta(rho, trivial);
  REQUIRE(p.weights.size() == 1);
  CHECK(p.weights[0] == doctest::Approx(1.0));
  CHECK(max_abs_diff(p.blocks[0], rho.matrix()) < 1e-14);

  // omega[delta, tau] = rho_AB (x) rho_C
  const TripartiteState mu = assemble(optimal_markov_for_decomposition(rho, trivial));
  const std::size_t ab[] = {0, 1}, c[] = {2};
  const ComplexMatrix want = kron(partial_trace(rho.matrix(), kDims, ab), partial_trace(rho.matrix(), kDims, c));
  CHECK(max_abs_diff(mu.matrix(), want) < 1e-14);

  const TwoRelents t = two_relents_identity(rho, trivial);
  CHECK(std::abs(t.term1) < 1e-10);
  const std::size_t dims2[] = {4, 2};
  const std::size_t first[] = {0}, second[] = {1};
  CHECK(t.term2 == doctest::Approx(mutual_information(rho.matrix(), dims2, first, second)).epsilon(1e-10));
}

TEST_CASE("assembled markov states have zero cmi") {
  const std::vector<std::vector<SummandShape>> shapes = {{{1, 1}}, {{2, 2}}, {{2, 1}, {1, 2}}, {{1, 1}, {2, 2}}};
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const MarkovState m = random_markov_state(2, 2, shapes[i], 50 + i);
    const TripartiteState mu = assemble(m);
    CHECK(std::abs(mu.matrix().trace() - cplx(1.0)) < 1e-13);
    CHECK(std::abs(conditional_mutual_information(mu)) < 1e-9);
    CHECK(relent_via_formula(mu, Decomposition(shapes[i], ComplexMatrix::identity(mu.dims().b))) < 1e-9);
    CHECK(conditional_mutual_information(hidden_markov_state(2, 2, shapes[i], 60 + i)) < 1e-9);
  }
}

TEST_CASE("pure product components give a pure product state") {
  const ComplexMatrix s = random_density(2, 1, 1), x = random_density(2, 1, 2);
  const MarkovState m({1.0}, {s}, {x}, Decomposition::canonical(1, {{1, 1}}), 2, 2);
  const TripartiteState mu = assemble(m);
  CHECK(std::abs(von_neumann_entropy(mu.matrix())) < 1e-12);
  CHECK(std::abs(conditional_mutual_information(mu)) < 1e-12);
}

TEST_CASE("classical chain embedded diagonally") {
  // P(x, y, z) = P(y) P(x|y) P(z|y) as a diagonal density matrix
  const std::vector<double> table{0.12, 0.08, 0.03, 0.27, 0.18, 0.12, 0.02, 0.18};
  const ClassicalJoint p({2, 2, 2}, table);
  CHECK(classical_cmi(p) < 1e-12);
  const TripartiteState rho(ComplexMatrix::diagonal(table), Dims3{2, 2, 2});
  CHECK(std::abs(conditional_mutual_information(rho)) < 1e-12);

  // the same chain as a two-summand markov state: block y holds P(x|y) (x) P(z|y)
  std::vector<ComplexMatrix> left, right;
  std::vector<double> weights;
  for (std::size_t y = 0; y < 2; ++y) {
    const double py = p.marginal_y()[y];
    weights.push_back(py);
    std::vector<double> px(2, 0.0), pz(2, 0.0);
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t z = 0; z < 2; ++z) {
        px[x] += p(x, y, z) / py;
        pz[z] += p(x, y, z) / py;
      }
    left.push_back(ComplexMatrix::diagonal(px));
    right.push_back(ComplexMatrix::diagonal(pz));
  }
  const MarkovState m(weights, left, right, Decomposition::canonical(2, {{1, 1}, {1, 1}}), 2, 2);
  CHECK(max_abs_diff(assemble(m).matrix(), rho.matrix()) < 1e-14);
}

TEST_CASE("block weights and the pinched state") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const TripartiteState rho = random_state(100 + s);
    const Decomposition d = random_decomposition(2, 200 + s);
    const BlockProjection p = project_omega_delta(rho, d);
    double total = 0.0;
    for (double q : p.weights) total += q;
    CHECK(std::abs(total - 1.0) < 1e-10);

    // independent pinching: embed, then zero every entry joining two different blocks
    const ComplexMatrix embedded = apply_isometry(rho, d.isometry(), 1).matrix();
    const std::vector<std::size_t> blocks = slot_blocks(d);
    const std::size_t n = d.embedded_dim();
    ComplexMatrix want = embedded;
    for (std::size_t i = 0; i < want.rows(); ++i)
      for (std::size_t j = 0; j < want.cols(); ++j)
        if (blocks[(i / 2) % n] != blocks[(j / 2) % n]) want(i, j) = 0.0;
    CHECK(max_abs_diff(omega_delta(rho, d), want) < 1e-12);
  }
}

TEST_CASE("block-diagonal input aligned with the decomposition") {
  const std::vector<SummandShape> shapes{{1, 1}, {1, 1}};
  const TripartiteState mu = assemble(random_markov_state(2, 2, shapes, 5));
  const Decomposition d = Decomposition::canonical(2, shapes);
  const TwoRelents t = two_relents_identity(mu, d);
  CHECK(std::abs(t.term1) < 1e-9);
  CHECK(std::abs(t.lhs) < 1e-9);
}

TEST_CASE("three evaluation routes agree") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const TripartiteState rho = random_state(300 + s);
    const Decomposition d = random_decomposition(2, 400 + s);
    const double f = relent_via_formula(rho, d);
    CHECK(std::abs(f - relent_compact_form(rho, d)) < 1e-8);
    CHECK(std::abs(f - relent_direct(rho, d)) < 1e-8);
    const TwoRelents t = two_relents_identity(rho, d);
    CHECK(std::abs(t.lhs - t.term1 - t.term2) < 1e-8);
    CHECK(f >= conditional_mutual_information(rho) - 1e-8);
  }
}

TEST_CASE("pure psi(0.5) with B kept whole gives twice S(A)") {
  const FamilyPoint p = psi_x(0.5);
  const double v = relent_via_formula(p.state, Decomposition::canonical(2, {{2, 1}}));
  CHECK(v == doctest::Approx(2.0 * p.closed_forms.at("S_A")).epsilon(1e-10));
  CHECK(v == doctest::Approx(1.622556248918).epsilon(1e-10));
}

TEST_CASE("optimal markov state beats random markov states on the same decomposition") {
  const TripartiteState rho = random_state(7);
  const Decomposition d = random_decomposition(2, 8);
  const double best = relent_via_formula(rho, d);
  const ComplexMatrix embedded = apply_isometry(rho, d.isometry(), 1).matrix();
  Rng rng(9);
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::vector<double> w;
    double total = 0.0;
    std::vector<ComplexMatrix> left, right;
    for (std::size_t j = 0; j < d.summands().size(); ++j) {
      w.push_back(rng.uniform(0.05, 1.0));
      total += w.back();
      left.push_back(random_density(2 * d.summands()[j].left, 2 * d.summands()[j].left, split_seed(s, 2 * j)));
      right.push_back(random_density(2 * d.summands()[j].right, 2 * d.summands()[j].right, split_seed(s, 2 * j + 1)));
    }
    for (double& x : w) x /= total;
    const MarkovState mu(w, left, right, Decomposition::canonical(d.embedded_dim(), d.summands()), 2, 2);
    const EntropyReport r = quantum_relative_entropy(embedded, assemble(mu).matrix());
    CHECK(best <= r.value + 1e-9);
  }
}

TEST_CASE("markov state validation") {
  const Decomposition d = Decomposition::canonical(2, {{1, 1}, {1, 1}});
  const ComplexMatrix s = random_density(2, 2, 1);
  CHECK_THROWS_AS(MarkovState({0.5, 0.6}, {s, s}, {s, s}, d, 2, 2), ValidationError);
  CHECK_THROWS_AS(MarkovState({0.5, 0.5}, {s}, {s, s}, d, 2, 2), DimensionError);
  CHECK_THROWS_AS(MarkovState({0.5, 0.5}, {s, random_density(4, 2, 2)}, {s, s}, d, 2, 2), DimensionError);
}
}
