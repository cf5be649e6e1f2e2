#include "haarquench/gme.hpp"

#include <algorithm>
#include <cmath>

namespace haarquench {

namespace {

sdp::BlockTerm transposed_term(const sdp::BlockTerm& term, int n_qubits, QubitMask mask, double sign,
                               std::size_t block) {
  sdp::BlockTerm out{block, {}};
  out.entries.reserve(term.entries.size());
  for (const auto& e : term.entries) {
    const auto [r, c] = linalg::partial_transpose_index(e.row, e.col, n_qubits, mask);
    out.entries.push_back({r, c, sign * e.value});
  }
  return out;
}

sdp::BlockTerm scaled_term(const sdp::BlockTerm& term, double sign, std::size_t block) {
  sdp::BlockTerm out{block, term.entries};
  for (auto& e : out.entries) e.value *= sign;
  return out;
}

ComplexMatrix combine(const std::vector<sdp::BlockTerm>& basis, const std::vector<double>& y, std::size_t offset,
                      std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (const auto& e : basis[k].entries)
      out(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += y[offset + k] * e.value;
  return 0.5 * (out + out.adjoint());
}

double bound_excess(const ComplexMatrix& m) {
  const auto eig = linalg::hermitian_eigen(0.5 * (m + m.adjoint()));
  return std::max({0.0, -eig.eigenvalues.minCoeff(), eig.eigenvalues.maxCoeff() - 1.0});
}

}  // namespace

double WitnessDecomposition::decomposition_residual() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < masks.size(); ++k)
    worst = std::max(worst, (witness - (p[k] + linalg::partial_transpose(q[k], masks[k]))).norm());
  return worst;
}

double WitnessDecomposition::bound_violation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < masks.size(); ++k) worst = std::max({worst, bound_excess(p[k]), bound_excess(q[k])});
  return worst;
}

bool WitnessDecomposition::is_valid() const {
  return decomposition_residual() <= 1e-6 && bound_violation() <= 1e-7;
}

std::vector<sdp::BlockTerm> hermitian_basis(std::size_t dim) {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<sdp::BlockTerm> basis;
  basis.reserve(dim * dim);
  for (std::size_t k = 0; k < dim; ++k) {
    basis.push_back({0, {{k, k, Complex(1.0)}}});
    for (std::size_t l = k + 1; l < dim; ++l) {
      basis.push_back({0, {{k, l, Complex(r)}, {l, k, Complex(r)}}});
      basis.push_back({0, {{k, l, Complex(0.0, -r)}, {l, k, Complex(0.0, r)}}});
    }
  }
  return basis;
}

sdp::SdpProblem build_witness_problem(const ComplexMatrix& rho, const std::vector<QubitMask>& masks) {
  const int n = linalg::qubit_count(rho);
  if (masks.empty()) throw Error(ErrorCode::InvalidMask, "at least one bipartition is required");
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t nb = 4 * masks.size();
  const auto basis = hermitian_basis(dim);
  const std::size_t d2 = basis.size();

  sdp::SdpProblem problem;
  problem.block_dims.assign(nb, dim);
  for (std::size_t m = 0; m < masks.size(); ++m) {
    // validates the mask as a side effect
    (void)linalg::partial_transpose(linalg::identity(dim), masks[m]);
    problem.objective.push_back(ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    problem.objective.push_back(linalg::identity(dim));
    problem.objective.push_back(ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    problem.objective.push_back(linalg::identity(dim));
  }

  problem.constraints.reserve(d2 * (1 + masks.size()));
  for (std::size_t k = 0; k < d2; ++k) {  // W coordinates
    sdp::Constraint con;
    double expectation = 0.0;
    for (const auto& e : basis[k].entries)
      expectation += (std::conj(e.value) * rho(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col))).real();
    con.rhs = -expectation;
    for (std::size_t m = 0; m < masks.size(); ++m) {
      con.terms.push_back(transposed_term(basis[k], n, masks[m], -1.0, 4 * m + 2));
      con.terms.push_back(transposed_term(basis[k], n, masks[m], +1.0, 4 * m + 3));
    }
    problem.constraints.push_back(std::move(con));
  }
  for (std::size_t m = 0; m < masks.size(); ++m)
    for (std::size_t k = 0; k < d2; ++k) {  // P_M coordinates
      sdp::Constraint con;
      con.terms.push_back(scaled_term(basis[k], -1.0, 4 * m));
      con.terms.push_back(scaled_term(basis[k], +1.0, 4 * m + 1));
      con.terms.push_back(transposed_term(basis[k], n, masks[m], +1.0, 4 * m + 2));
      con.terms.push_back(transposed_term(basis[k], n, masks[m], -1.0, 4 * m + 3));
      problem.constraints.push_back(std::move(con));
    }
  return problem;
}

GmeValue solve_witness_problem(const ComplexMatrix& rho, const std::vector<QubitMask>& masks,
                               const sdp::SdpOptions& options) {
  auto problem = std::make_shared<sdp::SdpProblem>(build_witness_problem(rho, masks));
  sdp::SdpSolution sol;
  try {
    sol = sdp::solve(*problem, options);
  } catch (const Error& e) {
    throw SolverFailure(e.what(), problem);
  }

  GmeValue out;
  out.solver_status = sol.status;
  out.relative_gap = sol.relative_gap;
  out.iterations = sol.iterations;
  if (sol.status != sdp::SdpStatus::Optimal) {
    if (!sol.within(1e-7))
      throw SolverFailure("witness SDP stopped with status " + std::string(sdp::to_string(sol.status)) +
                              ", gap " + std::to_string(sol.relative_gap),
                          problem);
    out.loose_tolerance = true;
  }

  const int n = linalg::qubit_count(rho);
  const std::size_t dim = std::size_t{1} << n;
  const auto basis = hermitian_basis(dim);
  auto& wd = out.witness;
  wd.masks = masks;
  wd.witness = combine(basis, sol.dual, 0, dim);
  for (std::size_t m = 0; m < masks.size(); ++m) {
    wd.p.push_back(combine(basis, sol.dual, (1 + m) * basis.size(), dim));
    wd.q.push_back(linalg::partial_transpose(wd.witness - wd.p.back(), masks[m]));
  }
  if (!wd.is_valid())
    throw SolverFailure("witness certificate check failed (bound violation " +
                            std::to_string(wd.bound_violation()) + ")",
                        problem);
  out.raw_objective = (wd.witness * rho).trace().real();
  out.value = std::max(0.0, -out.raw_objective);
  return out;
}

GmeValue gme_monotone(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3) throw Error(ErrorCode::DimMismatch, "gme_monotone needs a three-qubit state");
  return solve_witness_problem(rho.matrix(), {QubitMask{1}, QubitMask{2}, QubitMask{4}});
}

GmeValue gme_monotone_pure(const PureState& psi) {
  return gme_monotone(DensityMatrix(psi));
}

GmeValue gme_bipartite(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw Error(ErrorCode::DimMismatch, "gme_bipartite needs a two-qubit state");
  return solve_witness_problem(rho.matrix(), {QubitMask{1}});
}

double negativity(const DensityMatrix& rho, QubitMask mask) {
  const auto eig = linalg::hermitian_eigen(linalg::partial_transpose(rho.matrix(), mask));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k)
    if (eig.eigenvalues(k) < 0.0) sum -= eig.eigenvalues(k);
  return sum;
}

}  // namespace haarquench
