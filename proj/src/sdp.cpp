#include "haarquench/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "haarquench/error.hpp"

namespace haarquench::sdp {

std::string_view to_string(SdpStatus status) noexcept {
  switch (status) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::MaxIterations: return "MaxIterations";
    case SdpStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

std::size_t SdpProblem::total_dim() const noexcept {
  std::size_t n = 0;
  for (auto d : block_dims) n += d;
  return n;
}

BlockTerm sparse_term(std::size_t block, const ComplexMatrix& dense, double drop_tolerance) {
  BlockTerm term{block, {}};
  for (Eigen::Index r = 0; r < dense.rows(); ++r)
    for (Eigen::Index c = 0; c < dense.cols(); ++c)
      if (std::abs(dense(r, c)) > drop_tolerance)
        term.entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), dense(r, c)});
  return term;
}

ComplexMatrix dense_term(const BlockTerm& term, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& e : term.entries)
    out(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  return out;
}

void SdpProblem::validate() const {
  if (block_dims.empty()) throw Error(ErrorCode::InvalidArgument, "SDP has no blocks");
  if (objective.size() != block_dims.size())
    throw Error(ErrorCode::DimMismatch, "one objective matrix per block is required");
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    const auto d = static_cast<Eigen::Index>(block_dims[b]);
    if (d < 1 || d > 16) throw Error(ErrorCode::InvalidArgument, "block dimension must lie in [1, 16]");
    if (objective[b].rows() != d || objective[b].cols() != d)
      throw Error(ErrorCode::DimMismatch, "objective block " + std::to_string(b) + " has wrong shape");
    if (!objective[b].allFinite() || linalg::hermiticity_defect(objective[b]) > 1e-12)
      throw Error(ErrorCode::NotHermitian, "objective block " + std::to_string(b));
  }
  if (constraints.empty()) throw Error(ErrorCode::InvalidArgument, "SDP has no constraints");

  // Gram matrix of the constraint rows, accumulated entry position by entry position.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::pair<std::size_t, Complex>>> positions;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& con = constraints[i];
    if (!std::isfinite(con.rhs)) throw Error(ErrorCode::InvalidArgument, "non-finite right-hand side");
    for (const auto& term : con.terms) {
      if (term.block >= block_dims.size())
        throw Error(ErrorCode::OutOfRange, "constraint " + std::to_string(i) + " references a missing block");
      const auto dim = block_dims[term.block];
      ComplexMatrix dense = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (const auto& e : term.entries) {
        if (e.row >= dim || e.col >= dim)
          throw Error(ErrorCode::OutOfRange, "constraint " + std::to_string(i) + " entry outside its block");
        dense(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
      }
      if (!dense.allFinite() || linalg::hermiticity_defect(dense) > 1e-12)
        throw Error(ErrorCode::NotHermitian, "constraint " + std::to_string(i));
      for (Eigen::Index r = 0; r < dense.rows(); ++r)
        for (Eigen::Index c = 0; c < dense.cols(); ++c)
          if (dense(r, c) != Complex(0.0))
            positions[{term.block, static_cast<std::size_t>(r), static_cast<std::size_t>(c)}].emplace_back(
                i, dense(r, c));
    }
  }
  const auto m = static_cast<Eigen::Index>(constraints.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [pos, list] : positions)
    for (const auto& [i, a] : list)
      for (const auto& [j, c] : list)
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += (std::conj(a) * c).real();
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || pivots.maxCoeff() <= 0.0 || pivots.minCoeff() <= 1e-10 * pivots.maxCoeff())
    throw Error(ErrorCode::InvalidArgument, "constraint rows are linearly dependent");
}

namespace {

using BlockVec = std::vector<ComplexMatrix>;

struct TermRef {
  std::size_t constraint;
  std::size_t begin;
  std::size_t end;
};

// Flattened per-block view of the constraint matrices.
struct BlockIndex {
  std::vector<TermRef> terms;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<Complex> values;
};

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array().conjugate() * b.array()).real().sum();
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

double max_abs(const ComplexMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

// Largest alpha with L L^* + alpha * delta still PSD (infinity if unbounded).
double max_step(const Eigen::LLT<ComplexMatrix>& chol, const ComplexMatrix& delta) {
  const auto& l = chol.matrixL();
  const ComplexMatrix y = l.solve(delta);
  const ComplexMatrix z = hermitian_part(l.solve(y.adjoint()).adjoint());
  const double lambda_min = linalg::hermitian_eigen(z).eigenvalues.minCoeff();
  return lambda_min >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lambda_min;
}

// The Schur complement M = B^T B is normally not formed: near the optimum its
// condition number grows like 1/mu^2, while B itself only degrades like 1/mu.
// Factor B = Q R and solve R^T R x = r. If R comes out numerically singular,
// fall back to Cholesky of the equilibrated M with a tiny diagonal shift.
class SchurFactor {
 public:
  bool compute(const Eigen::MatrixXd& b) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    r_ = qr.matrixQR().topRows(b.cols()).triangularView<Eigen::Upper>();
    if (!r_.allFinite()) return false;
    const Eigen::VectorXd diag = r_.diagonal().cwiseAbs();
    if (diag.size() == 0 || diag.minCoeff() > 1e-14 * diag.maxCoeff()) return true;
    return cholesky(b.transpose() * b);
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (use_llt_) return llt_.solve(rhs.cwiseProduct(scale_)).cwiseProduct(scale_);
    const Eigen::VectorXd z = r_.transpose().triangularView<Eigen::Lower>().solve(rhs);
    return r_.triangularView<Eigen::Upper>().solve(z);
  }

 private:
  bool cholesky(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd d = m.diagonal();
    if (!(d.minCoeff() > 0.0)) return false;
    scale_ = d.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd a = scale_.asDiagonal() * m * scale_.asDiagonal();
    for (double shift : {0.0, 1e-12}) {
      a.diagonal().array() += shift;
      llt_.compute(a);
      if (llt_.info() == Eigen::Success) {
        use_llt_ = true;
        return true;
      }
    }
    return false;
  }

  Eigen::MatrixXd r_;
  bool use_llt_ = false;
  Eigen::VectorXd scale_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct Scaling {
  ComplexMatrix g;      // X = G Lambda G^*, S = G^{-*} Lambda G^{-1}
  ComplexMatrix g_inv;
  ComplexMatrix w;      // G G^*, satisfies W S W = X
  RealVector lambda;
};

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SdpOptions& o) : problem_(p), options_(o) {
    const std::size_t nb = p.block_dims.size();
    index_.resize(nb);
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
      for (const auto& term : p.constraints[i].terms) {
        auto& bi = index_[term.block];
        const std::size_t begin = bi.rows.size();
        for (const auto& e : term.entries) {
          bi.rows.push_back(static_cast<int>(e.row));
          bi.cols.push_back(static_cast<int>(e.col));
          bi.values.push_back(e.value);
        }
        bi.terms.push_back({i, begin, bi.rows.size()});
      }
    m_ = static_cast<Eigen::Index>(p.constraints.size());
    b_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) b_(i) = p.constraints[static_cast<std::size_t>(i)].rhs;
    n_ = static_cast<double>(p.total_dim());
  }

  SdpSolution run();

 private:
  Eigen::VectorXd apply_a(const BlockVec& x) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
    for (std::size_t blk = 0; blk < index_.size(); ++blk) {
      const auto& bi = index_[blk];
      const auto& xb = x[blk];
      for (const auto& t : bi.terms) {
        double s = 0.0;
        for (std::size_t e = t.begin; e < t.end; ++e)
          s += (std::conj(bi.values[e]) * xb(bi.rows[e], bi.cols[e])).real();
        out(static_cast<Eigen::Index>(t.constraint)) += s;
      }
    }
    return out;
  }

  BlockVec apply_at(const Eigen::VectorXd& y) const {
    BlockVec out;
    out.reserve(index_.size());
    for (std::size_t blk = 0; blk < index_.size(); ++blk) {
      const auto d = static_cast<Eigen::Index>(problem_.block_dims[blk]);
      ComplexMatrix acc = ComplexMatrix::Zero(d, d);
      const auto& bi = index_[blk];
      for (const auto& t : bi.terms) {
        const double yi = y(static_cast<Eigen::Index>(t.constraint));
        if (yi == 0.0) continue;
        for (std::size_t e = t.begin; e < t.end; ++e) acc(bi.rows[e], bi.cols[e]) += yi * bi.values[e];
      }
      out.push_back(std::move(acc));
    }
    return out;
  }

  // Column i holds the orthonormal real coordinates of G^* A_i G, so that
  // (B^T B)_ij = Re Tr(A_i W A_j W).
  Eigen::MatrixXd scaled_constraints(const std::vector<Scaling>& scaling) const {
    Eigen::Index rows = 0;
    for (auto d : problem_.block_dims) rows += static_cast<Eigen::Index>(d * d);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(rows, m_);
    const double r2 = std::sqrt(2.0);
    Eigen::Index offset = 0;
    for (std::size_t blk = 0; blk < index_.size(); ++blk) {
      const auto& bi = index_[blk];
      const ComplexMatrix& g = scaling[blk].g;
      const auto d = static_cast<Eigen::Index>(problem_.block_dims[blk]);
      ComplexMatrix t(d, d);
      for (const auto& term : bi.terms) {
        t.setZero();
        for (std::size_t e = term.begin; e < term.end; ++e)
          t += bi.values[e] * g.row(bi.rows[e]).adjoint() * g.row(bi.cols[e]);
        const auto col = static_cast<Eigen::Index>(term.constraint);
        Eigen::Index r = offset;
        for (Eigen::Index k = 0; k < d; ++k) {
          b(r++, col) += t(k, k).real();
          for (Eigen::Index l = k + 1; l < d; ++l) {
            b(r++, col) += r2 * t(k, l).real();
            b(r++, col) += r2 * t(k, l).imag();
          }
        }
      }
      offset += d * d;
    }
    return b;
  }

  // Solves the Newton system for a given complementarity right-hand side Rc:
  //   A(dX) = rp,  A^T dy + dS = Rd,  dX + W dS W = Rc.
  void newton(const SchurFactor& schur_chol, const std::vector<Scaling>& scaling,
              const Eigen::VectorXd& rp, const BlockVec& rd, const BlockVec& rc, BlockVec& dx,
              Eigen::VectorXd& dy, BlockVec& ds) const {
    BlockVec tmp(index_.size());
    for (std::size_t blk = 0; blk < index_.size(); ++blk)
      tmp[blk] = rc[blk] - scaling[blk].w * rd[blk] * scaling[blk].w;
    dy = schur_chol.solve(rp - apply_a(tmp));
    const BlockVec aty = apply_at(dy);
    ds.resize(index_.size());
    dx.resize(index_.size());
    for (std::size_t blk = 0; blk < index_.size(); ++blk) {
      ds[blk] = rd[blk] - aty[blk];
      dx[blk] = hermitian_part(rc[blk] - scaling[blk].w * ds[blk] * scaling[blk].w);
    }
    // A few rounds of iterative refinement restore A(dX) = rp without
    // touching the other two equations.
    const double target = 1e-15 * (1.0 + (rp.size() ? rp.cwiseAbs().maxCoeff() : 0.0));
    for (int round = 0; round < kRefinementRounds; ++round) {
      const Eigen::VectorXd res = rp - apply_a(dx);
      if (res.size() == 0 || res.cwiseAbs().maxCoeff() <= target) break;
      const Eigen::VectorXd correction = schur_chol.solve(res);
      const BlockVec at_corr = apply_at(correction);
      for (std::size_t blk = 0; blk < index_.size(); ++blk) {
        ds[blk] -= at_corr[blk];
        dx[blk] = hermitian_part(dx[blk] + scaling[blk].w * at_corr[blk] * scaling[blk].w);
      }
      dy += correction;
    }
  }

  static constexpr int kRefinementRounds = 3;

  const SdpProblem& problem_;
  const SdpOptions& options_;
  std::vector<BlockIndex> index_;
  Eigen::Index m_ = 0;
  Eigen::VectorXd b_;
  double n_ = 0.0;
};

SdpSolution InteriorPoint::run() {
  const std::size_t nb = problem_.block_dims.size();

  double scale = 0.0;
  for (const auto& c : problem_.objective) scale = std::max(scale, max_abs(c));
  for (const auto& bi : index_)
    for (const auto& v : bi.values) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);
  const double tau = 1.0 + scale;

  BlockVec x(nb), s(nb);
  for (std::size_t blk = 0; blk < nb; ++blk) {
    x[blk] = tau * linalg::identity(problem_.block_dims[blk]);
    s[blk] = x[blk];
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);

  const double norm_b = b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0;
  double norm_c = 0.0;
  for (const auto& c : problem_.objective) norm_c = std::max(norm_c, max_abs(c));

  SdpSolution sol;
  sol.status = SdpStatus::MaxIterations;

  auto evaluate = [&](Eigen::VectorXd& rp, BlockVec& rd, IterationRecord& rec) {
    rp = b_ - apply_a(x);
    const BlockVec aty = apply_at(y);
    rd.resize(nb);
    double pobj = 0.0, comp = 0.0, dres = 0.0;
    for (std::size_t blk = 0; blk < nb; ++blk) {
      rd[blk] = problem_.objective[blk] - s[blk] - aty[blk];
      pobj += inner(problem_.objective[blk], x[blk]);
      comp += inner(x[blk], s[blk]);
      dres = std::max(dres, max_abs(rd[blk]));
    }
    rec.primal_objective = pobj;
    rec.dual_objective = b_.dot(y);
    rec.primal_infeasibility = (rp.size() ? rp.cwiseAbs().maxCoeff() : 0.0) / (1.0 + norm_b);
    rec.dual_infeasibility = dres / (1.0 + norm_c);
    rec.complementarity = comp;
  };
  auto relative_gap = [](const IterationRecord& r) {
    const double gap = std::max(std::abs(r.primal_objective - r.dual_objective), std::abs(r.complementarity));
    return gap / (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));
  };

  Eigen::VectorXd rp;
  BlockVec rd;
  IterationRecord rec;
  int iter = 0;
  for (;; ++iter) {
    evaluate(rp, rd, rec);
    sol.history.push_back(rec);
    const double gap = relative_gap(rec);
    if (gap <= options_.tolerance && rec.primal_infeasibility <= options_.tolerance &&
        rec.dual_infeasibility <= options_.tolerance) {
      sol.status = SdpStatus::Optimal;
      break;
    }
    if (iter >= options_.max_iterations) {
      sol.status = SdpStatus::MaxIterations;
      break;
    }
    double size = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
    for (std::size_t blk = 0; blk < nb; ++blk) size = std::max({size, max_abs(x[blk]), max_abs(s[blk])});
    if (!std::isfinite(size) || size > 1e12)
      throw Error(ErrorCode::InfeasibleDetected, "iterates diverged after " + std::to_string(iter) + " iterations");

    // Nesterov-Todd scaling per block.
    std::vector<Scaling> scaling(nb);
    std::vector<Eigen::LLT<ComplexMatrix>> chol_x(nb), chol_s(nb);
    bool ok = true;
    for (std::size_t blk = 0; blk < nb && ok; ++blk) {
      chol_x[blk].compute(x[blk]);
      chol_s[blk].compute(s[blk]);
      if (chol_x[blk].info() != Eigen::Success || chol_s[blk].info() != Eigen::Success) {
        ok = false;
        break;
      }
      const ComplexMatrix l = chol_x[blk].matrixL();
      const ComplexMatrix t = hermitian_part(l.adjoint() * s[blk] * l);
      const auto eig = linalg::hermitian_eigen(t);
      if (eig.eigenvalues.minCoeff() <= 0.0) {
        ok = false;
        break;
      }
      auto& sc = scaling[blk];
      sc.lambda = eig.eigenvalues.cwiseSqrt();
      const RealVector inv_sqrt = sc.lambda.cwiseSqrt().cwiseInverse();
      const RealVector sqrt_l = sc.lambda.cwiseSqrt();
      sc.g = l * eig.eigenvectors * inv_sqrt.asDiagonal();
      const ComplexMatrix l_inv = chol_x[blk].matrixL().solve(linalg::identity(problem_.block_dims[blk]));
      sc.g_inv = sqrt_l.asDiagonal() * eig.eigenvectors.adjoint() * l_inv;
      sc.w = hermitian_part(sc.g * sc.g.adjoint());
    }
    if (!ok) {
      sol.status = SdpStatus::NumericalFailure;
      break;
    }

    SchurFactor schur_chol;
    if (!schur_chol.compute(scaled_constraints(scaling))) {
      sol.status = SdpStatus::NumericalFailure;
      break;
    }

    const double mu = rec.complementarity / n_;

    // Predictor (affine scaling) direction.
    BlockVec rc(nb), dx, ds;
    Eigen::VectorXd dy;
    for (std::size_t blk = 0; blk < nb; ++blk) rc[blk] = -x[blk];
    newton(schur_chol, scaling, rp, rd, rc, dx, dy, ds);

    double ap = 1.0, ad = 1.0;
    for (std::size_t blk = 0; blk < nb; ++blk) {
      ap = std::min(ap, max_step(chol_x[blk], dx[blk]));
      ad = std::min(ad, max_step(chol_s[blk], ds[blk]));
    }
    double mu_aff = 0.0;
    for (std::size_t blk = 0; blk < nb; ++blk)
      mu_aff += inner(x[blk] + ap * dx[blk], s[blk] + ad * ds[blk]);
    mu_aff /= n_;
    const double sigma = mu > 0.0 ? std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0) : 0.0;

    // Corrector: centring plus second-order term, solved in the scaled space
    // where both iterates equal diag(lambda).
    for (std::size_t blk = 0; blk < nb; ++blk) {
      const auto& sc = scaling[blk];
      const ComplexMatrix dxh = sc.g_inv * dx[blk] * sc.g_inv.adjoint();
      const ComplexMatrix dsh = sc.g.adjoint() * ds[blk] * sc.g;
      ComplexMatrix rhs = -0.5 * (dxh * dsh + dsh * dxh);
      for (Eigen::Index k = 0; k < rhs.rows(); ++k) rhs(k, k) += sigma * mu - sc.lambda(k) * sc.lambda(k);
      ComplexMatrix d(rhs.rows(), rhs.cols());
      for (Eigen::Index i = 0; i < rhs.rows(); ++i)
        for (Eigen::Index j = 0; j < rhs.cols(); ++j) d(i, j) = 2.0 * rhs(i, j) / (sc.lambda(i) + sc.lambda(j));
      rc[blk] = hermitian_part(sc.g * d * sc.g.adjoint());
    }
    newton(schur_chol, scaling, rp, rd, rc, dx, dy, ds);

    ap = std::numeric_limits<double>::infinity();
    ad = std::numeric_limits<double>::infinity();
    for (std::size_t blk = 0; blk < nb; ++blk) {
      ap = std::min(ap, max_step(chol_x[blk], dx[blk]));
      ad = std::min(ad, max_step(chol_s[blk], ds[blk]));
    }
    ap = std::min(1.0, options_.step_fraction * ap);
    ad = std::min(1.0, options_.step_fraction * ad);
    sol.history.back().primal_step = ap;
    sol.history.back().dual_step = ad;
    if (ap < 1e-12 && ad < 1e-12) {
      sol.status = SdpStatus::NumericalFailure;
      break;
    }

    for (std::size_t blk = 0; blk < nb; ++blk) {
      x[blk] = hermitian_part(x[blk] + ap * dx[blk]);
      s[blk] = hermitian_part(s[blk] + ad * ds[blk]);
    }
    y += ad * dy;
  }

  if (sol.status == SdpStatus::NumericalFailure) {
    evaluate(rp, rd, rec);
    sol.history.push_back(rec);
  }
  sol.iterations = iter;
  sol.primal = x;
  sol.slack = s;
  sol.dual.assign(y.data(), y.data() + y.size());
  sol.primal_objective = rec.primal_objective;
  sol.dual_objective = rec.dual_objective;
  sol.primal_infeasibility = rec.primal_infeasibility;
  sol.dual_infeasibility = rec.dual_infeasibility;
  sol.relative_gap = relative_gap(rec);
  return sol;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  if (options.validate) problem.validate();
  InteriorPoint ipm(problem, options);
  return ipm.run();
}

// ---------------------------------------------------------------------------
// Text dump

namespace {

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g", m(r, c).real(), m(r, c).imag());
      out << (c ? "  " : "") << buf;
    }
    out << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& in, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw Error(ErrorCode::ConfigError, "truncated matrix in SDP dump");
      m(r, c) = Complex(re, im);
    }
  return m;
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word)
    throw Error(ErrorCode::ConfigError, "SDP dump: expected '" + word + "', got '" + got + "'");
}

}  // namespace

void write_problem(std::ostream& out, const SdpProblem& problem) {
  out << "haarquench-sdp 1\n";
  out << "blocks " << problem.block_dims.size() << '\n';
  for (std::size_t b = 0; b < problem.block_dims.size(); ++b) out << (b ? " " : "") << problem.block_dims[b];
  out << '\n';
  out << "constraints " << problem.constraints.size() << '\n';
  out << "objective\n";
  for (std::size_t b = 0; b < problem.block_dims.size(); ++b) {
    out << "block " << b << '\n';
    write_matrix(out, problem.objective[b]);
  }
  char buf[64];
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& con = problem.constraints[i];
    std::snprintf(buf, sizeof buf, "%.17g", con.rhs);
    out << "constraint " << i << " rhs " << buf << " terms " << con.terms.size() << '\n';
    for (const auto& term : con.terms) {
      out << "block " << term.block << '\n';
      write_matrix(out, dense_term(term, problem.block_dims.at(term.block)));
    }
  }
}

SdpProblem read_problem(std::istream& in) {
  SdpProblem p;
  expect(in, "haarquench-sdp");
  int version = 0;
  if (!(in >> version) || version != 1) throw Error(ErrorCode::ConfigError, "unsupported SDP dump version");
  expect(in, "blocks");
  std::size_t nb = 0;
  in >> nb;
  p.block_dims.resize(nb);
  for (auto& d : p.block_dims) in >> d;
  expect(in, "constraints");
  std::size_t m = 0;
  in >> m;
  if (!in) throw Error(ErrorCode::ConfigError, "malformed SDP dump header");
  expect(in, "objective");
  for (std::size_t b = 0; b < nb; ++b) {
    expect(in, "block");
    std::size_t idx = 0;
    in >> idx;
    if (idx != b) throw Error(ErrorCode::ConfigError, "objective blocks out of order");
    p.objective.push_back(read_matrix(in, p.block_dims[b]));
  }
  for (std::size_t i = 0; i < m; ++i) {
    Constraint con;
    std::size_t idx = 0, nterms = 0;
    expect(in, "constraint");
    in >> idx;
    expect(in, "rhs");
    in >> con.rhs;
    expect(in, "terms");
    in >> nterms;
    if (!in || idx != i) throw Error(ErrorCode::ConfigError, "malformed constraint header");
    for (std::size_t t = 0; t < nterms; ++t) {
      expect(in, "block");
      std::size_t blk = 0;
      in >> blk;
      if (!in || blk >= nb) throw Error(ErrorCode::ConfigError, "constraint references a missing block");
      con.terms.push_back(sparse_term(blk, read_matrix(in, p.block_dims[blk])));
    }
    p.constraints.push_back(std::move(con));
  }
  return p;
}

}  // namespace haarquench::sdp
