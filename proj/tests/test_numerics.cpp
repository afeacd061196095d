#include <doctest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "tariff/numerics.hpp"

using namespace tariff;
using namespace tariff::numerics;

namespace {

LinearProgram make_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& rl, const Eigen::VectorXd& ru,
                      const Eigen::VectorXd& vl, const Eigen::VectorXd& vu) {
  LinearProgram lp;
  lp.objective = c;
  lp.A = A;
  lp.row_lower = rl;
  lp.row_upper = ru;
  lp.var_lower = vl;
  lp.var_upper = vu;
  return lp;
}

LinearProgram random_lp(Rng& rng, int n, int m) {
  Eigen::VectorXd c(n), vl(n), vu(n);
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd rl(m), ru(m);
  for (int j = 0; j < n; ++j) {
    c(j) = rng.uniform(-2.0, 2.0);
    vl(j) = rng.uniform(-3.0, 0.0);
    vu(j) = vl(j) + rng.uniform(0.5, 4.0);
  }
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = rng.uniform(vl(j), vu(j));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-1.0, 1.0);
    double mid = A.row(i).dot(x0);
    rl(i) = mid - rng.uniform(0.1, 2.0);
    ru(i) = mid + rng.uniform(0.1, 2.0);
  }
  return make_lp(c, A, rl, ru, vl, vu);
}

QuadraticProgram random_box_qp(Rng& rng, int n) {
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
  QuadraticProgram qp;
  qp.Q = M.transpose() * M + 0.1 * Eigen::MatrixXd::Identity(n, n);
  qp.q.resize(n);
  qp.A = Eigen::MatrixXd::Identity(n, n);
  qp.row_lower.resize(n);
  qp.row_upper.resize(n);
  for (int j = 0; j < n; ++j) {
    qp.q(j) = rng.uniform(-2.0, 2.0);
    qp.row_lower(j) = rng.uniform(-2.0, 0.0);
    qp.row_upper(j) = qp.row_lower(j) + rng.uniform(0.5, 3.0);
  }
  return qp;
}

}  // namespace

TEST_CASE("lp: active bound") {
  // min x, 3 <= x <= 10
  auto lp = make_lp(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Identity(1, 1),
                    Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(1, 10.0),
                    Eigen::VectorXd::Constant(1, -kInf), Eigen::VectorXd::Constant(1, kInf));
  auto rep = solve_lp(lp);
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(rep.solution(0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rep.objective == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rep.dual_residual <= 1e-8);
}

TEST_CASE("lp: unit triangle") {
  // min -x-y s.t. x+y <= 1, x,y in [0,1] -> objective -1
  Eigen::MatrixXd A(1, 2);
  A << 1.0, 1.0;
  auto lp = make_lp(Eigen::VectorXd::Constant(2, -1.0), A,
                    Eigen::VectorXd::Constant(1, -kInf), Eigen::VectorXd::Constant(1, 1.0),
                    Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
  auto rep = solve_lp(lp);
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(rep.objective == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("lp: infeasible box is certified") {
  // x >= 3 and x <= 2 expressed as two rows
  Eigen::MatrixXd A(2, 1);
  A << 1.0, 1.0;
  Eigen::VectorXd rl(2), ru(2);
  rl << 3.0, -kInf;
  ru << kInf, 2.0;
  auto lp = make_lp(Eigen::VectorXd::Ones(1), A, rl, ru,
                    Eigen::VectorXd::Constant(1, -kInf), Eigen::VectorXd::Constant(1, kInf));
  auto rep = solve_lp(lp);
  CHECK(rep.status == SolveStatus::Infeasible);
  CHECK(rep.objective > 1e-7);  // phase-1 certificate
}

TEST_CASE("lp: bad bounds rejected") {
  auto lp = make_lp(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Identity(1, 1),
                    Eigen::VectorXd::Constant(1, 5.0), Eigen::VectorXd::Constant(1, 4.0),
                    Eigen::VectorXd::Constant(1, -kInf), Eigen::VectorXd::Constant(1, kInf));
  CHECK_THROWS_AS(solve_lp(lp), InputError);
}

TEST_CASE("lp: random instances match vertex enumeration") {
  Rng rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    auto lp = random_lp(rng, 5, 3);
    auto rep = solve_lp(lp);
    REQUIRE(rep.status == SolveStatus::Optimal);
    double oracle = oracles::lp_vertex_optimum(lp);
    CHECK(rep.objective == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(rep.primal_residual <= 1e-8);
    CHECK(rep.dual_residual <= 1e-6);  // duality gap at the reported optimum
  }
}

TEST_CASE("lp: scaling the objective keeps the argmin") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto lp = random_lp(rng, 4, 2);
    auto rep1 = solve_lp(lp);
    auto scaled = lp;
    scaled.objective *= 37.5;
    auto rep2 = solve_lp(scaled);
    REQUIRE(rep1.status == SolveStatus::Optimal);
    REQUIRE(rep2.status == SolveStatus::Optimal);
    CHECK(rep2.objective == doctest::Approx(37.5 * rep1.objective).epsilon(1e-8));
  }
}

TEST_CASE("qp: unconstrained parabola") {
  // min (x-2)^2 = x^2 - 4x + 4
  QuadraticProgram qp;
  qp.Q = 2.0 * Eigen::MatrixXd::Identity(1, 1);
  qp.q = Eigen::VectorXd::Constant(1, -4.0);
  qp.A.resize(0, 1);
  qp.row_lower.resize(0);
  qp.row_upper.resize(0);
  auto rep = solve_qp(qp);
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(rep.solution(0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("qp: symmetric corner") {
  // min x^2 + y^2 s.t. x + y >= 2 -> (1,1), objective 2
  QuadraticProgram qp;
  qp.Q = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  qp.q = Eigen::VectorXd::Zero(2);
  qp.A = Eigen::MatrixXd::Ones(1, 2);
  qp.row_lower = Eigen::VectorXd::Constant(1, 2.0);
  qp.row_upper = Eigen::VectorXd::Constant(1, kInf);
  auto rep = solve_qp(qp);
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(rep.solution(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rep.solution(1) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rep.objective == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("qp: indefinite matrix rejected") {
  QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Identity(2, 2);
  qp.Q(1, 1) = -1.0;
  qp.q = Eigen::VectorXd::Zero(2);
  qp.A.resize(0, 2);
  qp.row_lower.resize(0);
  qp.row_upper.resize(0);
  CHECK_THROWS_AS(solve_qp(qp), InputError);
}

TEST_CASE("qp: semidefinite matrix accepted") {
  QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Zero(2, 2);
  qp.Q(0, 0) = 2.0;  // rank one, still PSD
  qp.q.resize(2);
  qp.q << -2.0, 1.0;
  qp.A = Eigen::MatrixXd::Identity(2, 2);
  qp.row_lower = Eigen::VectorXd::Zero(2);
  qp.row_upper = Eigen::VectorXd::Ones(2);
  auto rep = solve_qp(qp);
  REQUIRE(rep.status == SolveStatus::Optimal);
  CHECK(rep.solution(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rep.solution(1) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("qp: random box instances match projected gradient") {
  Rng rng(99);
  QpOptions tight;
  tight.tol_abs = 1e-9;
  tight.tol_rel = 1e-8;
  for (int trial = 0; trial < 25; ++trial) {
    auto qp = random_box_qp(rng, 10);
    auto rep = solve_qp(qp, tight);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.primal_residual <= 1e-6);
    CHECK(rep.dual_residual <= 1e-6);
    auto x_pg = oracles::projected_gradient_qp(qp.Q, qp.q, qp.row_lower, qp.row_upper);
    double obj_pg = 0.5 * x_pg.dot(qp.Q * x_pg) + qp.q.dot(x_pg);
    CHECK(std::abs(rep.objective - obj_pg) <= 1e-6 * std::max(1.0, std::abs(obj_pg)));
  }
}

TEST_CASE("qp: scaling the objective keeps the argmin") {
  Rng rng(5150);
  auto qp = random_box_qp(rng, 6);
  auto rep1 = solve_qp(qp);
  auto scaled = qp;
  scaled.Q *= 4.0;
  scaled.q *= 4.0;
  auto rep2 = solve_qp(scaled);
  REQUIRE(rep1.status == SolveStatus::Optimal);
  REQUIRE(rep2.status == SolveStatus::Optimal);
  CHECK((rep1.solution - rep2.solution).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("qp: contradictory row bounds report infeasible") {
  QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Identity(1, 1);
  qp.q = Eigen::VectorXd::Zero(1);
  qp.A = Eigen::MatrixXd::Identity(1, 1);
  qp.row_lower = Eigen::VectorXd::Constant(1, 2.0);
  qp.row_upper = Eigen::VectorXd::Constant(1, 1.0);
  auto rep = solve_qp(qp);
  CHECK(rep.status == SolveStatus::Infeasible);
}
