#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "haarquench/sdp.hpp"
#include "helpers.hpp"
#include "oracle_data.hpp"

using namespace haarquench;
using namespace haarquench::sdp;

namespace {

SdpProblem min_eigenvalue_problem(const std::vector<ComplexMatrix>& blocks) {
  SdpProblem p;
  Constraint trace;
  trace.rhs = 1.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    p.block_dims.push_back(static_cast<std::size_t>(blocks[b].rows()));
    p.objective.push_back(blocks[b]);
    trace.terms.push_back(sparse_term(b, ComplexMatrix::Identity(blocks[b].rows(), blocks[b].rows())));
  }
  p.constraints.push_back(trace);
  return p;
}

double min_eig(const ComplexMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m).eigenvalues().minCoeff();
}

SdpProblem reference_problem(const nlohmann::json& j) {
  SdpProblem p;
  const ComplexMatrix c = testing::complex_matrix(j["objective"]);
  p.block_dims = {static_cast<std::size_t>(c.rows())};
  p.objective = {c};
  for (std::size_t i = 0; i < j["constraints"].size(); ++i) {
    Constraint con;
    con.terms.push_back(sparse_term(0, testing::complex_matrix(j["constraints"][i])));
    con.rhs = j["rhs"][i].get<double>();
    p.constraints.push_back(con);
  }
  return p;
}

double block_inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace().real(); }

}  // namespace

TEST_SUITE("sdp") {
  TEST_CASE("trace-one problem returns the smallest eigenvalue") {
    std::mt19937_64 gen(31);
    for (Eigen::Index d : {2, 3, 5, 8}) {
      const ComplexMatrix c = testing::random_hermitian(gen, d);
      const auto sol = solve(min_eigenvalue_problem({c}));
      REQUIRE(sol.status == SdpStatus::Optimal);
      CHECK(std::abs(sol.primal_objective - min_eig(c)) < 1e-7);
      CHECK(std::abs(sol.dual[0] - min_eig(c)) < 1e-7);
    }
  }

  TEST_CASE("several blocks") {
    std::mt19937_64 gen(32);
    const ComplexMatrix c1 = testing::random_hermitian(gen, 4), c2 = testing::random_hermitian(gen, 3);
    const auto sol = solve(min_eigenvalue_problem({c1, c2}));
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(std::abs(sol.dual_objective - std::min(min_eig(c1), min_eig(c2))) < 1e-7);
  }

  TEST_CASE("unit-diagonal problem with a complex rank-one objective") {
    const Eigen::Index d = 4;
    ComplexVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v(k) = std::polar(1.0, 0.7 * static_cast<double>(k * k));
    SdpProblem p;
    p.block_dims = {static_cast<std::size_t>(d)};
    p.objective = {-(v * v.adjoint())};
    for (Eigen::Index k = 0; k < d; ++k) {
      Constraint con;
      con.terms.push_back({0, {{static_cast<std::size_t>(k), static_cast<std::size_t>(k), 1.0}}});
      con.rhs = 1.0;
      p.constraints.push_back(con);
    }
    const auto sol = solve(p);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.primal_objective == doctest::Approx(-16.0).epsilon(1e-8));
    CHECK((sol.primal[0] - v * v.adjoint()).norm() < 1e-5);
  }

  TEST_CASE("reference problem") {
    const auto ref = testing::load_reference()["sdp"];
    const auto sol = solve(reference_problem(ref));
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(std::abs(sol.primal_objective - ref["value"].get<double>()) < 1e-5);
  }

  TEST_CASE("optimality certificate") {
    std::mt19937_64 gen(33);
    const auto ref = testing::load_reference()["sdp"];
    const SdpProblem p = reference_problem(ref);
    const auto sol = solve(p);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.within(1e-8));
    CHECK(min_eig(sol.primal[0]) > -1e-10);
    CHECK(min_eig(sol.slack[0]) > -1e-10);
    CHECK(std::abs(block_inner(sol.primal[0], sol.slack[0])) < 1e-6);
    // Weak duality on every iterate that is already feasible.
    for (const auto& it : sol.history)
      if (it.primal_infeasibility < 1e-10 && it.dual_infeasibility < 1e-10)
        CHECK(it.dual_objective <= it.primal_objective + 1e-8 * (1.0 + std::abs(it.primal_objective)));
    CHECK(sol.dual_objective <= sol.primal_objective + 1e-8 * (1.0 + std::abs(sol.primal_objective)));
  }

  TEST_CASE("solves are deterministic") {
    const SdpProblem p = reference_problem(testing::load_reference()["sdp"]);
    const auto a = solve(p), b = solve(p);
    CHECK(a.iterations == b.iterations);
    CHECK(a.primal_objective == b.primal_objective);
    CHECK(a.dual == b.dual);
  }

  TEST_CASE("validation") {
    SdpProblem p = min_eigenvalue_problem({linalg::identity(2)});
    p.constraints.push_back(p.constraints[0]);
    CHECK_THROWS_AS(p.validate(), Error);
    SdpProblem q = min_eigenvalue_problem({linalg::identity(2)});
    q.objective[0](0, 1) = 1.0;
    CHECK_THROWS_AS(q.validate(), Error);
    SdpProblem r = min_eigenvalue_problem({linalg::identity(2)});
    r.block_dims[0] = 3;
    CHECK_THROWS_AS(r.validate(), Error);
  }

  TEST_CASE("infeasible problem is not reported optimal") {
    SdpProblem p = min_eigenvalue_problem({linalg::identity(3)});
    p.constraints[0].rhs = -1.0;
    bool reported_optimal = false;
    try {
      reported_optimal = solve(p).status == SdpStatus::Optimal;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleDetected);
    }
    CHECK_FALSE(reported_optimal);
  }

  TEST_CASE("text round trip") {
    const SdpProblem p = reference_problem(testing::load_reference()["sdp"]);
    std::stringstream s;
    write_problem(s, p);
    const SdpProblem back = read_problem(s);
    REQUIRE(back.block_dims == p.block_dims);
    REQUIRE(back.constraints.size() == p.constraints.size());
    CHECK((back.objective[0] - p.objective[0]).norm() == 0.0);
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
      CHECK(back.constraints[i].rhs == p.constraints[i].rhs);
      CHECK((dense_term(back.constraints[i].terms[0], 4) - dense_term(p.constraints[i].terms[0], 4)).norm() == 0.0);
    }
    std::istringstream bad("not-an-sdp 1\n");
    CHECK_THROWS_AS(read_problem(bad), Error);
  }
}
