#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "haarquench/distributions.hpp"
#include "haarquench/linalg.hpp"

namespace haarquench {

/// Unnormalized real coefficient tuple of an n-qubit pure state.
/// Entry 2k is the real part and 2k+1 the imaginary part of the amplitude
/// on basis state |k>, so for two qubits the order is
/// (alpha1, alpha2, beta1, beta2, gamma1, gamma2, delta1, delta2) on
/// |00>, |01>, |10>, |11>; for three qubits (a1, a2, ..., h1, h2) on |000>..|111>.
struct RawCoefficients {
  int n_qubits = 2;
  std::vector<double> reals;

  RawCoefficients() = default;
  RawCoefficients(int n, std::vector<double> values);

  double norm() const noexcept;
};

class PureState {
 public:
  PureState(int n_qubits, ComplexVector amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  ComplexMatrix projector() const;

 private:
  int n_qubits_;
  ComplexVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity (tolerance 1e-10).
  DensityMatrix(int n_qubits, ComplexMatrix matrix);
  explicit DensityMatrix(const PureState& psi);

  int n_qubits() const noexcept { return n_qubits_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  static DensityMatrix maximally_mixed(int n_qubits);

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, int n_qubits, ComplexMatrix matrix)
      : n_qubits_(n_qubits), matrix_(std::move(matrix)) {}
  friend DensityMatrix with_white_noise(const PureState& psi, double p);
  friend DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

  int n_qubits_;
  ComplexMatrix matrix_;
};

inline constexpr double kMinRawNorm = 1e-12;

/// 2^(n+1) i.i.d. standard normals, not normalized.
RawCoefficients haar_raw(int n_qubits, RngStream& rng);

/// Throws ZeroVector when the raw norm is below 1e-12.
PureState normalize(const RawCoefficients& raw);

/// Replaces each targeted coefficient by an independent draw centred on its
/// current (pre-normalization) value. Other entries are left untouched.
RawCoefficients inject_disorder(const RawCoefficients& raw, std::span<const std::size_t> targets,
                                DistributionFamily family, double siqr, RngStream& rng);

/// p |psi><psi| + (1 - p) I / 2^n.
DensityMatrix with_white_noise(const PureState& psi, double p);

/// t a + (1 - t) b.
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

/// Bell state (|00> + |11>)/sqrt(2).
PureState bell_state();
/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
PureState ghz_state(int n_qubits);
/// Computational basis state |index> on n qubits.
PureState basis_state(int n_qubits, std::size_t index);

/// Name of coefficient k in the named tuple ("alpha1", "a2", ...).
std::string coefficient_name(int n_qubits, std::size_t index);

/// CSV dump: header of coefficient names, one row per state, %.17g.
void write_raw_csv(std::ostream& out, std::span<const RawCoefficients> states);

}  // namespace haarquench
