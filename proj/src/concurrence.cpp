#include "haarquench/concurrence.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "haarquench/error.hpp"

namespace haarquench {

namespace {
constexpr double kRankTolerance = 1e-14;
}  // namespace

ComplexMatrix spin_flip(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw Error(ErrorCode::DimMismatch, "spin_flip needs a 4x4 matrix");
  // sigma_y (x) sigma_y is real and anti-diagonal with signs (-1, 1, 1, -1),
  // so the conjugation only permutes entries and flips signs.
  static constexpr double kSign[4] = {-1.0, 1.0, 1.0, -1.0};
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = kSign[i] * kSign[j] * std::conj(rho(3 - i, 3 - j));
  return out;
}

double concurrence_mixed(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw Error(ErrorCode::DimMismatch, "concurrence needs a two-qubit state");
  const auto eig = linalg::hermitian_eigen(rho.matrix());
  // Eigenvalues at the solver's round-off level are treated as exact zeros;
  // keeping them would feed their square roots (~1e-8) into the result.
  const double floor = kRankTolerance * std::max(1.0, eig.eigenvalues(0));
  Eigen::Index rank = 0;
  while (rank < 4 && eig.eigenvalues(rank) > floor) ++rank;
  if (rank == 0) return 0.0;

  // rho = V V^dagger with V = U sqrt(mu); the lambda_i are the singular values
  // of tau = V^T (sigma_y (x) sigma_y) V.
  ComplexMatrix v = eig.eigenvectors.leftCols(rank);
  for (Eigen::Index k = 0; k < rank; ++k) v.col(k) *= std::sqrt(eig.eigenvalues(k));
  ComplexMatrix yv(4, rank);
  static constexpr double kSign[4] = {-1.0, 1.0, 1.0, -1.0};
  for (int i = 0; i < 4; ++i) yv.row(i) = kSign[i] * v.row(3 - i);
  const ComplexMatrix tau = v.transpose() * yv;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();

  double c = sv(0);
  for (Eigen::Index k = 1; k < sv.size(); ++k) c -= sv(k);
  return std::clamp(c, 0.0, 1.0);
}

double concurrence_pure(const PureState& psi) {
  if (psi.n_qubits() != 2) throw Error(ErrorCode::DimMismatch, "concurrence needs a two-qubit state");
  const auto& a = psi.amplitudes();
  return std::clamp(2.0 * std::abs(a(0) * a(3) - a(1) * a(2)), 0.0, 1.0);
}

}  // namespace haarquench
