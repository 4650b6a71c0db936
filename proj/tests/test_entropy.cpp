#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"
#include "qmc/families.hpp"

using namespace qmc;

namespace {

ComplexMatrix bell() {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<cplx> v{s, 0.0, 0.0, s};
  return ComplexMatrix::projector(v);
}

}  // namespace

TEST_SUITE("entropy") {
TEST_CASE("shannon entropy with clamping") {
  CHECK(shannon_entropy(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(shannon_entropy(std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(shannon_entropy(std::vector<double>{1.0, -1e-10}) == 0.0);
  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{1.0, -1e-6}), ValidationError);
}

TEST_CASE("von neumann entropy") {
  for (std::size_t d = 1; d <= 5; ++d)
    CHECK(von_neumann_entropy(ComplexMatrix::identity(d) * cplx(1.0 / d)) ==
          doctest::Approx(std::log2(static_cast<double>(d))).epsilon(1e-13));
  CHECK(std::abs(von_neumann_entropy(bell())) < 1e-12);
  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::identity(2)), ValidationError);

  // rho_A of psi(0.5) is diag(0.75, 0.25)
  const FamilyPoint p = psi_x(0.5);
  const std::size_t dims[] = {2, 2, 2};
  const std::size_t a[] = {0};
  CHECK(subsystem_entropy(p.state.matrix(), dims, a) == doctest::Approx(oracle::h2(0.25)).epsilon(1e-12));
  CHECK(oracle::h2(0.25) == doctest::Approx(0.811278124459).epsilon(1e-11));
}

TEST_CASE("relative entropy") {
  const ComplexMatrix zero = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0});
  const ComplexMatrix mixed = ComplexMatrix::identity(2) * cplx(0.5);
  CHECK(quantum_relative_entropy(zero, mixed).value == doctest::Approx(1.0));
  const ComplexMatrix rho = random_density(4, 3, 5);
  CHECK(std::abs(quantum_relative_entropy(rho, rho).value) < 1e-10);

  const EntropyReport bad = quantum_relative_entropy(mixed, zero);
  CHECK_FALSE(bad.finite);
  CHECK(bad.value == kInfiniteEntropy);
  CHECK(bad.support_defect == doctest::Approx(0.5));
  CHECK_THROWS_AS(quantum_relative_entropy(rho, mixed), DimensionError);

  // classical case against the direct sum
  const std::vector<double> p{0.2, 0.3, 0.5}, q{0.4, 0.4, 0.2};
  double want = 0.0;
  for (int i = 0; i < 3; ++i) want += p[i] * std::log2(p[i] / q[i]);
  CHECK(quantum_relative_entropy(ComplexMatrix::diagonal(p), ComplexMatrix::diagonal(q)).value ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("mutual information equals relative entropy to the product of marginals") {
  const std::size_t dims[] = {2, 2};
  const std::size_t a[] = {0}, b[] = {1};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix rho = random_density(4, 1 + s % 4, 40 + s);
    const ComplexMatrix prod = kron(partial_trace(rho, dims, a), partial_trace(rho, dims, b));
    const double i_ab = mutual_information(rho, dims, a, b);
    CHECK(i_ab >= -1e-12);
    CHECK(std::abs(quantum_relative_entropy(rho, prod).value - i_ab) < 1e-9);
  }
}

TEST_CASE("bell state and products") {
  const std::size_t dims[] = {2, 2};
  const std::size_t a[] = {0}, b[] = {1};
  CHECK(mutual_information(bell(), dims, a, b) == doctest::Approx(2.0));
  CHECK(conditional_entropy(bell(), dims, a, b) == doctest::Approx(-1.0));
  const ComplexMatrix prod = kron(random_density(2, 2, 1), random_density(2, 2, 2));
  CHECK(std::abs(mutual_information(prod, dims, a, b)) < 1e-12);
  CHECK_THROWS_AS(mutual_information(prod, dims, a, a), DimensionError);
  const std::size_t bad[] = {4};
  CHECK_THROWS_AS(mutual_information(prod, dims, a, bad), DimensionError);
}

TEST_CASE("conditional mutual information of the family states") {
  CHECK(conditional_mutual_information(zeta_d(2).state) == doctest::Approx(1.0 + std::log2(2.0 / 3.0)).epsilon(1e-12));
  CHECK(conditional_mutual_information(zeta_d(2).state) == doctest::Approx(0.415037499279).epsilon(1e-11));
  CHECK(conditional_mutual_information(psi_x(1.0 / std::sqrt(2.0)).state) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t s = 0; s < 50; ++s)
    CHECK(conditional_mutual_information(random_tripartite({2, 2, 2}, 1 + s % 8, s)) >= -1e-9);
}

TEST_CASE("continuity bounds") {
  CHECK(fannes_bound(0.1, 2) == doctest::Approx(-0.1 * std::log2(0.1) + 0.1));
  CHECK(alicki_fannes_bound(0.1, 2) == doctest::Approx(2 * oracle::h2(0.1) + 0.4));
  CHECK_THROWS_AS(fannes_bound(0.5, 2), ValidationError);
  CHECK_THROWS_AS(fannes_bound(0.0, 2), ValidationError);
  CHECK_THROWS_AS(alicki_fannes_bound(1.5, 2), ValidationError);
  const ComplexMatrix rho = random_density(3, 3, 8), sigma = random_density(3, 3, 9);
  CHECK(pinsker_floor(rho, rho) == 0.0);
  const double t = trace_norm(rho - sigma) / (2.0 * std::log(2.0));
  CHECK(pinsker_floor(rho, sigma) == doctest::Approx(t * t));
  CHECK(pinsker_floor(rho, sigma) <= quantum_relative_entropy(rho, sigma).value);
}

TEST_CASE("nearest pure state") {
  const NearestPure np = nearest_pure(ComplexMatrix::diagonal(std::vector<double>{0.9, 0.1}));
  CHECK(np.distance == doctest::Approx(0.2));
  CHECK(std::abs(std::abs(np.state.amplitudes()[0]) - 1.0) < 1e-12);
  const NearestPure self = nearest_pure(bell());
  CHECK(std::abs(self.distance) < 1e-12);
  CHECK(max_abs_diff(self.state.density(), bell()) < 1e-12);
}

TEST_CASE("entropy is unitarily invariant") {
  const ComplexMatrix rho = random_density(5, 3, 77);
  const ComplexMatrix u = random_haar_isometry(5, 5, 78);
  CHECK(std::abs(von_neumann_entropy(u * rho * u.adjoint()) - von_neumann_entropy(rho)) < 1e-10);
}
}
