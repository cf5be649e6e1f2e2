#include <cmath>
#include <random>

#include "doctest.h"
#include "haarquench/concurrence.hpp"
#include "helpers.hpp"

using namespace haarquench;

namespace {

// Independent route: eigenvalues of the non-Hermitian product rho * rho~.
double concurrence_general_eigen(const ComplexMatrix& rho) {
  const ComplexMatrix yy = linalg::tensor(linalg::pauli_y(), linalg::pauli_y());
  const ComplexMatrix tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(rho * tilde);
  std::vector<double> l;
  for (Eigen::Index i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace

TEST_SUITE("concurrence") {
  TEST_CASE("Bell and product states") {
    CHECK(concurrence_pure(bell_state()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(concurrence_mixed(DensityMatrix(bell_state())) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(concurrence_pure(basis_state(2, 1)) == 0.0);
    CHECK(concurrence_mixed(DensityMatrix(basis_state(2, 2))) < 1e-10);
    CHECK(concurrence_mixed(DensityMatrix::maximally_mixed(2)) == 0.0);
  }

  TEST_CASE("Werner states") {
    for (int k = 0; k <= 20; ++k) {
      const double p = 0.05 * k;
      const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
      CHECK(std::abs(concurrence_mixed(with_white_noise(bell_state(), p)) - expected) < 1e-9);
    }
  }

  TEST_CASE("spin flip") {
    const ComplexMatrix b = bell_state().projector();
    CHECK((spin_flip(b) - b).norm() < 1e-14);
    const ComplexMatrix flipped = spin_flip(DensityMatrix(basis_state(2, 0)).matrix());
    CHECK(std::abs(flipped(3, 3) - Complex(1.0, 0.0)) < 1e-15);
  }

  TEST_CASE("pure and mixed formulas agree on random pure states") {
    RngStream rng(21, 0);
    for (int i = 0; i < 2000; ++i) {
      const auto psi = normalize(haar_raw(2, rng));
      CHECK(std::abs(concurrence_pure(psi) - concurrence_mixed(DensityMatrix(psi))) < 1e-8);
    }
  }

  TEST_CASE("mixed states agree with the non-Hermitian eigenvalue route") {
    std::mt19937_64 gen(22);
    for (int i = 0; i < 500; ++i) {
      const ComplexMatrix rho = testing::random_density(gen, 4, 1 + i % 4);
      CHECK(std::abs(concurrence_mixed(DensityMatrix(2, rho)) - concurrence_general_eigen(rho)) < 1e-7);
    }
  }

  TEST_CASE("invariance under local unitaries") {
    std::mt19937_64 gen(23);
    const ComplexMatrix rho = testing::random_density(gen, 4, 2);
    const ComplexMatrix u = linalg::tensor(testing::random_unitary(gen, 2), testing::random_unitary(gen, 2));
    ComplexMatrix r2 = u * rho * u.adjoint();
    r2 = 0.5 * (r2 + r2.adjoint());
    CHECK(std::abs(concurrence_mixed(DensityMatrix(2, rho)) - concurrence_mixed(DensityMatrix(2, r2))) < 1e-9);
  }
}
