#include <algorithm>
#include <random>

#include "doctest.h"
#include "haarquench/linalg.hpp"
#include "helpers.hpp"

using namespace haarquench;
using haarquench::linalg::frobenius_inner;
using haarquench::linalg::hermitian_eigen;
using haarquench::linalg::identity;
using haarquench::linalg::matrix_sqrt_psd;
using haarquench::linalg::partial_transpose;
using haarquench::linalg::tensor;

namespace {

// Characteristic polynomial by Faddeev-LeVerrier; coefficients c[0..n] of
// det(xI - A) = sum_k c[k] x^k with c[n] = 1.
std::vector<Complex> char_poly(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * ComplexMatrix::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

// Roots from the companion matrix with Eigen's general complex eigensolver.
std::vector<double> real_roots_sorted_desc(const std::vector<Complex>& c) {
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  ComplexMatrix comp = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<ComplexMatrix> es(comp);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i).real());
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

double reconstruction_error(const ComplexMatrix& m, const linalg::HermitianEigenResult& e) {
  const ComplexMatrix back = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
  return (back - m).norm() / std::max(1.0, m.norm());
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("eigenvalues of the identity") {
    const auto e = hermitian_eigen(identity(4));
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("diagonal input gives sorted eigenvalues and permutation eigenvectors") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const auto e = hermitian_eigen(d);
    CHECK(e.eigenvalues(0) == doctest::Approx(3.0));
    CHECK(e.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(e.eigenvalues(2) == doctest::Approx(1.0));
    const Eigen::MatrixXd mag = e.eigenvectors.cwiseAbs();
    CHECK(mag(0, 0) == doctest::Approx(1.0));
    CHECK(mag(2, 1) == doctest::Approx(1.0));
    CHECK(mag(1, 2) == doctest::Approx(1.0));
  }

  TEST_CASE("random 8x8 Hermitian matches characteristic-polynomial roots") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix h = testing::random_hermitian(gen, 8);
      const auto e = hermitian_eigen(h);
      const auto roots = real_roots_sorted_desc(char_poly(h));
      for (Eigen::Index i = 0; i < 8; ++i)
        CHECK(std::abs(e.eigenvalues(i) - roots[static_cast<std::size_t>(i)]) < 1e-8);
    }
  }

  TEST_CASE("reconstruction, unitarity, trace and determinant") {
    std::mt19937_64 gen(12);
    for (Eigen::Index d : {2, 4, 8, 16}) {
      const ComplexMatrix h = testing::random_hermitian(gen, d);
      const auto e = hermitian_eigen(h);
      CHECK(reconstruction_error(h, e) < 1e-10);
      CHECK((e.eigenvectors.adjoint() * e.eigenvectors - identity(static_cast<std::size_t>(d))).norm() < 1e-10);
      CHECK(std::abs(e.eigenvalues.sum() - h.trace().real()) < 1e-10 * static_cast<double>(d));
      const double det = h.determinant().real();
      CHECK(std::abs(e.eigenvalues.prod() - det) <= 1e-8 * std::abs(det));
      for (Eigen::Index i = 1; i < d; ++i) CHECK(e.eigenvalues(i - 1) >= e.eigenvalues(i));
    }
  }

  TEST_CASE("degenerate spectra") {
    std::mt19937_64 gen(13);
    const ComplexMatrix u = testing::random_unitary(gen, 8);
    Eigen::VectorXd lam(8);
    lam << 2, 2, 2, 1, 1, 0, 0, -1;
    const ComplexMatrix h = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
    const auto e = hermitian_eigen(0.5 * (h + h.adjoint()));
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(lam(i)).epsilon(1e-12));
    CHECK(reconstruction_error(h, e) < 1e-10);
  }

  TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m = identity(2);
    m(0, 1) = 1e-6;
    CHECK_THROWS_AS(hermitian_eigen(m), Error);
    try {
      hermitian_eigen(m);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotHermitian);
    }
  }

  TEST_CASE("matrix square root") {
    CHECK((matrix_sqrt_psd(identity(4)) - identity(4)).norm() < 1e-14);

    ComplexMatrix d = ComplexMatrix::Zero(4, 4);
    d.diagonal() << 4.0, 9.0, 0.0, 1.0;
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected.diagonal() << 2.0, 3.0, 0.0, 1.0;
    CHECK((matrix_sqrt_psd(d) - expected).norm() < 1e-12);

    std::mt19937_64 gen(14);
    for (Eigen::Index rank : {1, 3, 8}) {
      const ComplexMatrix p = testing::random_psd(gen, 8, rank);
      const ComplexMatrix r = matrix_sqrt_psd(p);
      CHECK((r * r - p).norm() < 1e-9);
      CHECK((r * p - p * r).norm() < 1e-9);
      CHECK(linalg::hermiticity_defect(r) < 1e-12);
      CHECK(hermitian_eigen(0.5 * (r + r.adjoint())).eigenvalues.minCoeff() > -1e-12);
    }
  }

  TEST_CASE("square root clamps round-off but rejects real negativity") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d.diagonal() << 1.0, -5e-11;
    CHECK(matrix_sqrt_psd(d)(1, 1) == Complex(0.0, 0.0));
    d(1, 1) = -1e-6;
    try {
      matrix_sqrt_psd(d);
      FAIL("expected NegativeEigenvalue");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NegativeEigenvalue);
    }
  }

  TEST_CASE("tensor product") {
    CHECK((tensor(identity(2), identity(2)) - identity(4)).norm() == 0.0);
    const ComplexMatrix yy = tensor(linalg::pauli_y(), linalg::pauli_y());
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 3) = -1.0;
    expected(1, 2) = 1.0;
    expected(2, 1) = 1.0;
    expected(3, 0) = -1.0;
    CHECK((yy - expected).norm() < 1e-15);

    std::mt19937_64 gen(15);
    const ComplexMatrix a = testing::random_matrix(gen, 2, 2), b = testing::random_matrix(gen, 2, 2);
    const ComplexMatrix c = testing::random_matrix(gen, 2, 2), d = testing::random_matrix(gen, 2, 2);
    CHECK((tensor(a, b) * tensor(c, d) - tensor(a * c, b * d)).norm() < 1e-12);
  }

  TEST_CASE("partial transpose of a product operator") {
    std::mt19937_64 gen(16);
    const ComplexMatrix a = testing::random_matrix(gen, 2, 2), b = testing::random_matrix(gen, 4, 4);
    const ComplexMatrix ab = tensor(a, b);
    CHECK((partial_transpose(ab, 0b001) - tensor(a.transpose(), b)).norm() < 1e-14);
    // Qubits 1 and 2 form the second factor.
    CHECK((partial_transpose(ab, 0b110) - tensor(a, b.transpose())).norm() < 1e-14);
  }

  TEST_CASE("partial transpose involution, trace, complement") {
    std::mt19937_64 gen(17);
    const ComplexMatrix m = testing::random_matrix(gen, 8, 8);
    for (QubitMask mask = 1; mask < 7; ++mask) {
      const ComplexMatrix t = partial_transpose(m, mask);
      CHECK((partial_transpose(t, mask) - m).norm() == 0.0);
      CHECK(std::abs(t.trace() - m.trace()) < 1e-12);
      CHECK((partial_transpose(t, 7u & ~mask) - m.transpose()).norm() == 0.0);
    }
  }

  TEST_CASE("Bell state partial transpose has eigenvalue -1/2") {
    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix rho = bell * bell.adjoint();
    for (QubitMask mask : {1u, 2u}) {
      const auto e = hermitian_eigen(partial_transpose(rho, mask));
      CHECK(e.eigenvalues.minCoeff() == doctest::Approx(-0.5).epsilon(1e-12));
    }
  }

  TEST_CASE("invalid masks") {
    const ComplexMatrix m = identity(8);
    for (QubitMask mask : {0u, 7u, 8u}) {
      try {
        partial_transpose(m, mask);
        FAIL("expected InvalidMask");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidMask);
      }
    }
  }

  TEST_CASE("Frobenius inner product") {
    CHECK(frobenius_inner(identity(4), identity(4)) == Complex(4.0, 0.0));
    std::mt19937_64 gen(18);
    const ComplexMatrix h = testing::random_hermitian(gen, 4);
    const Complex hh = frobenius_inner(h, h);
    CHECK(hh.real() >= 0.0);
    CHECK(std::abs(hh.imag()) < 1e-12);
    const ComplexMatrix a = testing::random_matrix(gen, 4, 4), b = testing::random_matrix(gen, 4, 4);
    CHECK(std::abs(frobenius_inner(a, b) - std::conj(frobenius_inner(b, a))) < 1e-12);
    const ComplexMatrix g = testing::random_hermitian(gen, 4);
    CHECK(std::abs(frobenius_inner(h, g).imag()) < 1e-12);
    CHECK_THROWS_AS(frobenius_inner(identity(2), identity(4)), Error);
  }
}
