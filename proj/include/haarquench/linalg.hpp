#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace haarquench {

using Complex = std::complex<double>;

/// Dense square complex matrix. Every quantum object in the library
/// (density matrices, witnesses, Pauli operators) is one of these.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Bit mask over qubits. Qubit 0 is the MOST significant bit of a
/// computational-basis index: |q0 q1 q2> is row q0*4 + q1*2 + q2.
/// Bit k of the mask selects qubit k.
using QubitMask = std::uint32_t;

namespace linalg {

struct HermitianEigenResult {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // columns, unitary
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kPsdClampTolerance = 1e-10;
inline constexpr int kMaxJacobiSweeps = 500;

ComplexMatrix identity(std::size_t dim);
ComplexMatrix pauli_y();

/// max_{ij} |m_ij - conj(m_ji)|
double hermiticity_defect(const ComplexMatrix& m);
bool is_finite(const ComplexMatrix& m);

/// Cyclic complex Jacobi. Throws NotHermitian / NoConvergence.
HermitianEigenResult hermitian_eigen(const ComplexMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-10, 0)
/// are clamped to zero; anything more negative throws NegativeEigenvalue.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

/// Kronecker product a (x) b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Number of qubits n for a 2^n x 2^n matrix; throws DimMismatch otherwise.
int qubit_count(const ComplexMatrix& m);

/// Partial transpose over the qubits selected by mask (non-empty proper subset).
ComplexMatrix partial_transpose(const ComplexMatrix& m, QubitMask mask);

/// Row/column pair that entry (row, col) moves to under partial_transpose.
std::pair<std::size_t, std::size_t> partial_transpose_index(std::size_t row, std::size_t col,
                                                            int n_qubits, QubitMask mask);

/// Tr(a^dagger b).
Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace linalg
}  // namespace haarquench
