#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "haarquench/linalg.hpp"

namespace haarquench::sdp {

/// One stored entry of a sparse Hermitian coefficient matrix. Both
/// triangles are stored explicitly: (r, c, v) must be matched by (c, r, conj v).
struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value;
};

struct BlockTerm {
  std::size_t block = 0;
  std::vector<MatrixEntry> entries;
};

/// sum_b <A_{i,b}, X_b> = rhs, with <A, X> = Re Tr(A^dagger X).
struct Constraint {
  std::vector<BlockTerm> terms;
  double rhs = 0.0;
};

/// Standard primal form
///
///   minimize   sum_b <C_b, X_b>
///   subject to sum_b <A_{i,b}, X_b> = b_i,   X_b Hermitian PSD,
///
/// whose dual is
///
///   maximize   b^T y
///   subject to C_b - sum_i y_i A_{i,b} = S_b,  S_b Hermitian PSD.
struct SdpProblem {
  std::vector<std::size_t> block_dims;
  std::vector<ComplexMatrix> objective;
  std::vector<Constraint> constraints;

  std::size_t total_dim() const noexcept;

  /// Checks shapes, Hermiticity (1e-12) and linear independence of the
  /// constraint rows (Gram matrix pivots above 1e-10 relative).
  void validate() const;
};

/// Keeps the nonzero entries of a dense Hermitian matrix.
BlockTerm sparse_term(std::size_t block, const ComplexMatrix& dense, double drop_tolerance = 0.0);
ComplexMatrix dense_term(const BlockTerm& term, std::size_t dim);

enum class SdpStatus { Optimal, MaxIterations, NumericalFailure };
std::string_view to_string(SdpStatus status) noexcept;

struct IterationRecord {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;  // sum_b <X_b, S_b>
  double primal_step = 0.0;
  double dual_step = 0.0;
};

struct SdpSolution {
  std::vector<ComplexMatrix> primal;  // X_b
  std::vector<double> dual;           // y
  std::vector<ComplexMatrix> slack;   // S_b
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;  // ||A(X) - b||_inf / (1 + ||b||_inf)
  double dual_infeasibility = 0.0;    // max |C - S - A^T y| / (1 + max |C|)
  SdpStatus status = SdpStatus::NumericalFailure;
  int iterations = 0;
  std::vector<IterationRecord> history;  // state at the start of each iteration, plus the final one

  /// True when gap and residuals are all below tol.
  bool within(double tol) const noexcept {
    return relative_gap <= tol && primal_infeasibility <= tol && dual_infeasibility <= tol;
  }
};

struct SdpOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;
  double step_fraction = 0.98;
  bool validate = true;
};

/// Infeasible-start primal-dual interior point method with Nesterov-Todd
/// scaling and Mehrotra predictor-corrector steps. Hermitian blocks are
/// handled in complex arithmetic. The Schur complement B^T B is never
/// formed: B is factored by Householder QR, with an equilibrated Cholesky of
/// B^T B as the fallback when R is numerically singular.
///
/// Throws InfeasibleDetected when the iterates diverge. MaxIterations and
/// NumericalFailure are reported through SdpSolution::status so the caller
/// can still inspect the last iterate.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

/// Plain-text dump: a "haarquench-sdp 1" header, block dimensions, then
/// every objective and constraint matrix densely in row-major order as
/// "re im" pairs. See README for the exact grammar.
void write_problem(std::ostream& out, const SdpProblem& problem);
SdpProblem read_problem(std::istream& in);

}  // namespace haarquench::sdp
