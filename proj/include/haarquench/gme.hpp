#pragma once

#include <array>
#include <memory>
#include <vector>

#include "haarquench/error.hpp"
#include "haarquench/sdp.hpp"
#include "haarquench/states.hpp"

namespace haarquench {

/// Witness W together with its decomposition W = P_M + Q_M^{T_M} for every
/// bipartition M. For three qubits the bipartitions are A|BC, B|CA, C|AB
/// (masks selecting qubit 0, 1, 2); for two qubits there is only A|B.
struct WitnessDecomposition {
  ComplexMatrix witness;
  std::vector<QubitMask> masks;
  std::vector<ComplexMatrix> p;
  std::vector<ComplexMatrix> q;

  /// Largest ||W - (P_M + Q_M^{T_M})||_F over all bipartitions.
  double decomposition_residual() const;
  /// Largest violation of 0 <= P_M, Q_M <= 1 (0 when all bounds hold).
  double bound_violation() const;
  /// Decomposition residual <= 1e-6 and bound violation <= 1e-7.
  bool is_valid() const;
};

struct GmeValue {
  double value = 0.0;          // max(0, -raw_objective)
  double raw_objective = 0.0;  // Tr(W rho) for the optimal witness
  WitnessDecomposition witness;
  sdp::SdpStatus solver_status = sdp::SdpStatus::Optimal;
  double relative_gap = 0.0;
  int iterations = 0;
  /// Set when the solver stopped between the loose (1e-7) and strict (1e-8) tolerances.
  bool loose_tolerance = false;
};

/// Raised when the witness SDP cannot be solved to the loose tolerance.
/// Carries the offending problem so it can be dumped for post-mortem.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, std::shared_ptr<const sdp::SdpProblem> problem)
      : Error(ErrorCode::SolverFailure, what), problem_(std::move(problem)) {}
  const std::shared_ptr<const sdp::SdpProblem>& problem() const noexcept { return problem_; }

 private:
  std::shared_ptr<const sdp::SdpProblem> problem_;
};

/// Orthonormal basis of Hermitian d x d matrices: E_kk, (E_kl + E_lk)/sqrt2,
/// i(E_kl - E_lk)/sqrt2 for k < l; d^2 elements, in that order per (k, l).
std::vector<sdp::BlockTerm> hermitian_basis(std::size_t dim);

/// The witness program for rho over the given bipartition masks, posed so
/// that its SDP dual is
///
///   maximize -Tr(W rho) over (W, P_M),  Q_M = (W - P_M)^{T_M},
///   subject to 0 <= P_M <= 1 and 0 <= Q_M <= 1 for every M.
///
/// Dual variables y are laid out as [W, P_M1, P_M2, ...] in hermitian_basis
/// coordinates; slack blocks come in groups of four per bipartition:
/// P_M, 1 - P_M, Q_M, 1 - Q_M.
sdp::SdpProblem build_witness_problem(const ComplexMatrix& rho, const std::vector<QubitMask>& masks);

/// Solves a witness problem built by build_witness_problem.
GmeValue solve_witness_problem(const ComplexMatrix& rho, const std::vector<QubitMask>& masks,
                               const sdp::SdpOptions& options = {});

/// Genuine multipartite entanglement monotone of a three-qubit state:
/// minus the optimal expectation of a fully decomposable witness with
/// 0 <= P_M, Q_M <= 1, floored at zero.
GmeValue gme_monotone(const DensityMatrix& rho);
GmeValue gme_monotone_pure(const PureState& psi);

/// Single-bipartition (A|B) version for two qubits; equals the negativity.
GmeValue gme_bipartite(const DensityMatrix& rho);

/// Sum of |negative eigenvalues| of the partial transpose over mask.
double negativity(const DensityMatrix& rho, QubitMask mask);

}  // namespace haarquench
