#include "haarquench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "haarquench/error.hpp"

namespace haarquench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::InvalidMask: return "InvalidMask";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InfeasibleDetected: return "InfeasibleDetected";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace linalg {

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

ComplexMatrix pauli_y() {
  ComplexMatrix y(2, 2);
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return y;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimMismatch, "matrix is not square");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

bool is_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

namespace {

double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// Zeroes a(p,q) with the unitary J = D R D^dagger, where D removes the
// phase of a(p,q) and R is the real Jacobi rotation for the resulting
// real symmetric 2x2 problem. Updates a <- J^dagger a J and v <- v J.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  // J(p,p)=c, J(p,q)=s*phase, J(q,p)=-s*conj(phase), J(q,q)=c
  const Complex jpq = s * phase;
  const Complex jqp = -s * std::conj(phase);
  const Eigen::Index n = a.rows();

  for (Eigen::Index k = 0; k < n; ++k) {  // a <- a J (columns)
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * c + akq * jqp;
    a(k, q) = akp * jpq + akq * c;
  }
  for (Eigen::Index k = 0; k < n; ++k) {  // a <- J^dagger a (rows)
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + c * aqk;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * c + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * c;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

HermitianEigenResult hermitian_eigen(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimMismatch, "hermitian_eigen needs a non-empty square matrix");
  if (!is_finite(m)) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTolerance)
    throw Error(ErrorCode::NotHermitian, "hermiticity defect " + std::to_string(defect));

  const Eigen::Index n = m.rows();
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold2 = std::pow(1e-12 * a.norm(), 2);

  bool converged = off_diagonal_norm2(a) <= threshold2;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    converged = off_diagonal_norm2(a) <= threshold2;
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "Jacobi sweep budget exhausted");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });

  HermitianEigenResult out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  auto eig = hermitian_eigen(m);
  RealVector root(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < root.size(); ++k) {
    const double lambda = eig.eigenvalues(k);
    if (lambda < -kPsdClampTolerance)
      throw Error(ErrorCode::NegativeEigenvalue, "eigenvalue " + std::to_string(lambda));
    root(k) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  ComplexMatrix r = eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.adjoint();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int qubit_count(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimMismatch, "matrix is not square");
  const auto dim = static_cast<std::size_t>(m.rows());
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw Error(ErrorCode::DimMismatch, "dimension " + std::to_string(dim) + " is not a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

std::pair<std::size_t, std::size_t> partial_transpose_index(std::size_t row, std::size_t col,
                                                            int n_qubits, QubitMask mask) {
  // qubit k lives at bit (n-1-k) of the basis index
  std::size_t bits = 0;
  for (int k = 0; k < n_qubits; ++k)
    if (mask & (QubitMask{1} << k)) bits |= std::size_t{1} << (n_qubits - 1 - k);
  const std::size_t swapped = (row ^ col) & bits;
  return {row ^ swapped, col ^ swapped};
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, QubitMask mask) {
  const int n = qubit_count(m);
  const QubitMask full = (QubitMask{1} << n) - 1;
  if (mask == 0 || (mask & full) == full || (mask & ~full) != 0)
    throw Error(ErrorCode::InvalidMask, "mask must select a non-empty proper subset of " +
                                            std::to_string(n) + " qubits");
  ComplexMatrix out(m.rows(), m.cols());
  const auto dim = static_cast<std::size_t>(m.rows());
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const auto [r2, c2] = partial_transpose_index(r, c, n, mask);
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  return out;
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimMismatch, "frobenius_inner needs equal shapes");
  return (a.adjoint() * b).trace();
}

}  // namespace linalg
}  // namespace haarquench
