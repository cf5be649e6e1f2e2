#include "haarquench/states.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "haarquench/error.hpp"

namespace haarquench {

namespace {

void check_qubits(int n) {
  if (n != 2 && n != 3) throw Error(ErrorCode::InvalidArgument, "only 2 or 3 qubits are supported");
}

std::size_t dim_of(int n) { return std::size_t{1} << n; }

}  // namespace

RawCoefficients::RawCoefficients(int n, std::vector<double> values) : n_qubits(n), reals(std::move(values)) {
  check_qubits(n);
  if (reals.size() != 2 * dim_of(n))
    throw Error(ErrorCode::DimMismatch, "expected " + std::to_string(2 * dim_of(n)) + " coefficients");
  for (double v : reals)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
}

double RawCoefficients::norm() const noexcept {
  double s = 0.0;
  for (double v : reals) s += v * v;
  return std::sqrt(s);
}

PureState::PureState(int n_qubits, ComplexVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubits(n_qubits);
  if (static_cast<std::size_t>(amplitudes_.size()) != dim_of(n_qubits))
    throw Error(ErrorCode::DimMismatch, "amplitude vector has wrong length");
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "state is not normalized");
}

ComplexMatrix PureState::projector() const {
  return amplitudes_ * amplitudes_.adjoint();
}

DensityMatrix::DensityMatrix(int n_qubits, ComplexMatrix matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  check_qubits(n_qubits);
  if (static_cast<std::size_t>(matrix_.rows()) != dim_of(n_qubits) || matrix_.rows() != matrix_.cols())
    throw Error(ErrorCode::DimMismatch, "density matrix has wrong dimension");
  if (linalg::hermiticity_defect(matrix_) > 1e-10) throw Error(ErrorCode::NotHermitian, "density matrix");
  if (std::abs(matrix_.trace() - Complex(1.0)) > 1e-10)
    throw Error(ErrorCode::InvalidArgument, "density matrix trace is not 1");
  const auto eig = linalg::hermitian_eigen(matrix_);
  if (eig.eigenvalues.minCoeff() < -1e-10)
    throw Error(ErrorCode::NegativeEigenvalue, "density matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(const PureState& psi) : n_qubits_(psi.n_qubits()), matrix_(psi.projector()) {}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  check_qubits(n_qubits);
  const auto d = dim_of(n_qubits);
  return DensityMatrix(Unchecked{}, n_qubits, linalg::identity(d) / static_cast<double>(d));
}

RawCoefficients haar_raw(int n_qubits, RngStream& rng) {
  check_qubits(n_qubits);
  std::vector<double> reals(2 * dim_of(n_qubits));
  for (double& v : reals) v = rng.standard_normal();
  return RawCoefficients(n_qubits, std::move(reals));
}

PureState normalize(const RawCoefficients& raw) {
  const double norm = raw.norm();
  if (!(norm >= kMinRawNorm)) throw Error(ErrorCode::ZeroVector, "raw coefficient vector has zero norm");
  const std::size_t d = raw.reals.size() / 2;
  ComplexVector amps(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k)
    amps(static_cast<Eigen::Index>(k)) = Complex(raw.reals[2 * k], raw.reals[2 * k + 1]) / norm;
  // renormalize once more so that |<psi|psi> - 1| sits at round-off level
  amps /= amps.norm();
  return PureState(raw.n_qubits, std::move(amps));
}

RawCoefficients inject_disorder(const RawCoefficients& raw, std::span<const std::size_t> targets,
                                DistributionFamily family, double siqr, RngStream& rng) {
  if (targets.empty()) throw Error(ErrorCode::InvalidTarget, "no disorder targets");
  for (std::size_t t : targets)
    if (t >= raw.reals.size())
      throw Error(ErrorCode::InvalidTarget, "target index " + std::to_string(t) + " out of range");
  RawCoefficients out = raw;
  for (std::size_t t : targets) {
    const DistributionSpec spec{family, raw.reals[t], siqr};
    spec.validate();
    out.reals[t] = sample(spec, rng);
  }
  return out;
}

DensityMatrix with_white_noise(const PureState& psi, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "noise weight p must lie in [0, 1]");
  const auto d = dim_of(psi.n_qubits());
  ComplexMatrix rho = p * psi.projector();
  rho.diagonal().array() += (1.0 - p) / static_cast<double>(d);
  return DensityMatrix(DensityMatrix::Unchecked{}, psi.n_qubits(), std::move(rho));
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t) {
  if (a.n_qubits() != b.n_qubits()) throw Error(ErrorCode::DimMismatch, "mixing states of different size");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mixing weight must lie in [0, 1]");
  return DensityMatrix(DensityMatrix::Unchecked{}, a.n_qubits(), t * a.matrix() + (1.0 - t) * b.matrix());
}

PureState bell_state() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(2, v);
}

PureState ghz_state(int n_qubits) {
  check_qubits(n_qubits);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  ComplexVector v = ComplexVector::Zero(d);
  v(0) = v(d - 1) = 1.0 / std::sqrt(2.0);
  return PureState(n_qubits, v);
}

PureState basis_state(int n_qubits, std::size_t index) {
  check_qubits(n_qubits);
  if (index >= dim_of(n_qubits)) throw Error(ErrorCode::OutOfRange, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(n_qubits, v);
}

std::string coefficient_name(int n_qubits, std::size_t index) {
  check_qubits(n_qubits);
  if (index >= 2 * dim_of(n_qubits)) throw Error(ErrorCode::OutOfRange, "coefficient index out of range");
  static constexpr const char* kTwoQubit[] = {"alpha", "beta", "gamma", "delta"};
  const std::string base = n_qubits == 2 ? std::string(kTwoQubit[index / 2])
                                         : std::string(1, static_cast<char>('a' + index / 2));
  return base + (index % 2 == 0 ? "1" : "2");
}

void write_raw_csv(std::ostream& out, std::span<const RawCoefficients> states) {
  if (states.empty()) return;
  const int n = states.front().n_qubits;
  const std::size_t width = 2 * dim_of(n);
  for (std::size_t k = 0; k < width; ++k) out << (k ? "," : "") << coefficient_name(n, k);
  out << '\n';
  char buf[32];
  for (const auto& s : states) {
    if (s.n_qubits != n) throw Error(ErrorCode::DimMismatch, "mixed qubit counts in CSV dump");
    for (std::size_t k = 0; k < width; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", s.reals[k]);
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace haarquench
