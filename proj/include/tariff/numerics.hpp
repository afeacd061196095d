#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "tariff/common.hpp"

namespace tariff::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// min c'x  s.t.  row_lower <= A x <= row_upper,  var_lower <= x <= var_upper.
// Infinite bounds mark one-sided or free rows/variables.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd A;
  Eigen::VectorXd row_lower, row_upper;
  Eigen::VectorXd var_lower, var_upper;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(A.rows()); }
  void validate() const;
};

// min 0.5 x'Qx + q'x  s.t.  row_lower <= A x <= row_upper.
// Q must be symmetric positive semidefinite; variable bounds are expressed
// as identity rows of A.
struct QuadraticProgram {
  Eigen::MatrixXd Q;
  Eigen::VectorXd q;
  Eigen::MatrixXd A;
  Eigen::VectorXd row_lower, row_upper;

  int num_vars() const { return static_cast<int>(q.size()); }
  int num_rows() const { return static_cast<int>(A.rows()); }
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, MaxIterations };

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  Eigen::VectorXd solution;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;  // LP: duality gap at the reported point
  int iterations = 0;
  Eigen::VectorXd row_duals;  // multipliers for the ranged rows
};

std::string to_string(SolveStatus s);

// Dense two-phase primal simplex with Bland's anti-cycling rule.
SolveReport solve_lp(const LinearProgram& lp, double tol = 1e-9);

struct QpOptions {
  double rho = 1.0;
  double sigma = 1e-6;
  double tol_abs = 1e-8;
  double tol_rel = 1e-6;
  int max_iter = 100000;
  int check_interval = 25;
};

// ADMM operator splitting; handles coupled rows (e.g. column-sum
// constraints) without bespoke projections.
SolveReport solve_qp(const QuadraticProgram& qp, const QpOptions& opts = {});

}  // namespace tariff::numerics
