#include <cmath>
#include <random>

#include "doctest.h"
#include "haarquench/gme.hpp"
#include "helpers.hpp"
#include "oracle_data.hpp"

using namespace haarquench;

namespace {

PureState random_pure(std::mt19937_64& gen, int n) {
  return PureState(n, testing::random_unit_vector(gen, Eigen::Index{1} << n));
}

}  // namespace

TEST_SUITE("gme") {
  TEST_CASE("reference values from an independent conic solver") {
    for (const auto& c : testing::load_reference()["gme"]) {
      CAPTURE(c["name"].get<std::string>());
      const PureState psi(3, testing::complex_vector(c["amplitudes"]));
      const auto rho = with_white_noise(psi, c["p"].get<double>());
      const auto g = gme_monotone(rho);
      CHECK(std::abs(g.value - c["value"].get<double>()) < 1e-5);
      CHECK(g.witness.is_valid());
    }
  }

  TEST_CASE("GHZ reaches the maximum") {
    const auto g = gme_monotone_pure(ghz_state(3));
    CHECK(std::abs(g.value - 0.5) < 1e-5);
    CHECK(g.solver_status == sdp::SdpStatus::Optimal);
  }

  TEST_CASE("product and biseparable states") {
    CHECK(gme_monotone_pure(basis_state(3, 0)).value <= 1e-6);
    const ComplexVector bell = bell_state().amplitudes();
    ComplexVector zero = ComplexVector::Zero(2);
    zero(0) = 1.0;
    // Qubit 0 is the most significant factor.
    const ComplexVector bell_zero = linalg::tensor(bell, zero);
    const ComplexVector zero_bell = linalg::tensor(zero, bell);
    CHECK(gme_monotone_pure(PureState(3, bell_zero)).value <= 1e-6);
    CHECK(gme_monotone_pure(PureState(3, zero_bell)).value <= 1e-6);
    CHECK(gme_monotone(DensityMatrix::maximally_mixed(3)).value <= 1e-6);
  }

  TEST_CASE("certificate consistency") {
    std::mt19937_64 gen(41);
    const auto psi = random_pure(gen, 3);
    const DensityMatrix rho(psi);
    const auto g = gme_monotone(rho);
    REQUIRE(g.witness.is_valid());
    CHECK(g.witness.masks.size() == 3);
    CHECK(std::abs((g.witness.witness * rho.matrix()).trace().real() - g.raw_objective) < 1e-7);
    CHECK(g.value == std::max(0.0, -g.raw_objective));
    CHECK(g.relative_gap <= 1e-7);
    const auto gp = gme_monotone_pure(psi);
    CHECK(std::abs(gp.value - g.value) < 1e-7);
  }

  TEST_CASE("two-qubit version equals the negativity") {
    std::mt19937_64 gen(42);
    for (int i = 0; i < 20; ++i) {
      const auto rho = DensityMatrix(2, testing::random_density(gen, 4, 1 + i % 4));
      const double neg = negativity(rho, 1);
      const auto g = gme_bipartite(rho);
      CHECK(std::abs(g.value - neg) < 1e-6);
      CHECK(g.witness.masks.size() == 1);
    }
    CHECK(negativity(DensityMatrix(bell_state()), 1) == doctest::Approx(0.5));
  }

  TEST_CASE("Werner states at the separability edge") {
    const auto rho = with_white_noise(bell_state(), 1.0 / 3.0);
    CHECK(negativity(rho, 1) < 1e-12);
    CHECK(gme_bipartite(rho).value < 1e-6);
    const auto above = with_white_noise(bell_state(), 0.6);
    CHECK(gme_bipartite(above).value == doctest::Approx((3 * 0.6 - 1) / 4).epsilon(1e-6));
  }

  TEST_CASE("convexity") {
    std::mt19937_64 gen(43);
    for (int i = 0; i < 3; ++i) {
      const DensityMatrix a(random_pure(gen, 3));
      const DensityMatrix b(random_pure(gen, 3));
      const double t = 0.3 + 0.2 * i;
      const double mixed = gme_monotone(mix(a, b, t)).value;
      const double bound = t * gme_monotone(a).value + (1 - t) * gme_monotone(b).value;
      CHECK(mixed <= bound + 1e-6);
    }
  }

  TEST_CASE("invariance under local unitaries") {
    std::mt19937_64 gen(44);
    const auto psi = random_pure(gen, 3);
    const ComplexMatrix u = linalg::tensor(linalg::tensor(testing::random_unitary(gen, 2), testing::random_unitary(gen, 2)),
                                           testing::random_unitary(gen, 2));
    const PureState rotated(3, u * psi.amplitudes());
    CHECK(std::abs(gme_monotone_pure(psi).value - gme_monotone_pure(rotated).value) < 1e-6);
  }

  TEST_CASE("monotone under white noise") {
    const auto w = testing::load_reference()["gme"][1];
    const PureState psi(3, testing::complex_vector(w["amplitudes"]));
    double previous = 1.0;
    for (double p : {1.0, 0.9, 0.8, 0.7, 0.6}) {
      const double v = gme_monotone(with_white_noise(psi, p)).value;
      CHECK(v <= previous + 1e-7);
      previous = v;
    }
  }

  TEST_CASE("hermitian basis is orthonormal") {
    const auto basis = hermitian_basis(3);
    REQUIRE(basis.size() == 9);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double ip = (sdp::dense_term(basis[i], 3).adjoint() * sdp::dense_term(basis[j], 3)).trace().real();
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-14);
      }
  }
}
