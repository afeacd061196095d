#include "tariff/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace tariff::numerics {

namespace {

constexpr double kPivotEps = 1e-9;

bool finite(double v) { return std::isfinite(v); }

// Contribution of one boxed term to the Lagrangian lower bound:
// inf over t in [lo, hi] of coef * t.
double box_inf(double coef, double lo, double hi) {
  if (std::abs(coef) < 1e-13) return 0.0;
  if (coef > 0.0) return finite(lo) ? coef * lo : -kInf;
  return finite(hi) ? coef * hi : -kInf;
}

// Dense simplex tableau over min c'w s.t. SF w = b, w >= 0.
struct Tableau {
  Eigen::MatrixXd T;           // (rows+1) x (cols_total+1); last row costs, last col rhs
  std::vector<int> basis;      // basic column per row
  int rows = 0;
  int cols_total = 0;
  int iterations = 0;

  double rhs(int i) const { return T(i, cols_total); }

  void pivot(int r, int s) {
    T.row(r) /= T(r, s);
    for (int i = 0; i <= rows; ++i) {
      if (i == r) continue;
      double f = T(i, s);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[r] = s;
    ++iterations;
  }

  // Bland's rule: entering = lowest-index improving column, leaving = lowest
  // basic index among ratio ties. Returns false on an unbounded direction.
  bool run(int allowed_cols, int max_iter, bool& hit_cap) {
    hit_cap = false;
    for (;;) {
      int s = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (T(rows, j) < -kPivotEps) {
          s = j;
          break;
        }
      }
      if (s < 0) return true;  // optimal
      int r = -1;
      double best_ratio = kInf;
      for (int i = 0; i < rows; ++i) {
        if (T(i, s) > kPivotEps) {
          double ratio = rhs(i) / T(i, s);
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (r < 0 || basis[i] < basis[r]))) {
            best_ratio = ratio;
            r = i;
          }
        }
      }
      if (r < 0) return false;  // unbounded
      pivot(r, s);
      if (iterations >= max_iter) {
        hit_cap = true;
        return true;
      }
    }
  }
};

// One standard-form column, remembering how it maps back to a combined
// variable (x: indices 0..n-1, row range variables: n..n+m-1).
struct ColumnMap {
  int var = -1;
  double scale = 1.0;  // value = shift + scale * w
  double shift = 0.0;
  bool split_part = false;  // half of a free-variable split
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  const int n = num_vars();
  const int m = num_rows();
  require(A.cols() == n, "lp: objective/matrix dimension mismatch");
  require(static_cast<int>(row_lower.size()) == m && static_cast<int>(row_upper.size()) == m,
          "lp: row bound count mismatch");
  require(static_cast<int>(var_lower.size()) == n && static_cast<int>(var_upper.size()) == n,
          "lp: var bound count mismatch");
  for (int i = 0; i < m; ++i)
    require(row_lower[i] <= row_upper[i], "lp: row lower bound exceeds upper bound");
  for (int j = 0; j < n; ++j)
    require(var_lower[j] <= var_upper[j], "lp: var lower bound exceeds upper bound");
}

SolveReport solve_lp(const LinearProgram& lp, double tol) {
  lp.validate();
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  const int nv = n + m;  // x plus one range variable per row

  // Combined bounds/costs; range variable i carries the row-i bounds so that
  // every row becomes the equality A_i x - s_i = 0.
  Eigen::VectorXd lo(nv), hi(nv), cost = Eigen::VectorXd::Zero(nv);
  lo.head(n) = lp.var_lower;
  hi.head(n) = lp.var_upper;
  lo.tail(m) = lp.row_lower;
  hi.tail(m) = lp.row_upper;
  cost.head(n) = lp.objective;

  auto combined_col = [&](int j) -> Eigen::VectorXd {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
    if (j < n)
      col = lp.A.col(j);
    else
      col(j - n) = -1.0;
    return col;
  };

  // Shift/split every combined variable to w >= 0.
  std::vector<ColumnMap> columns;
  std::vector<int> capped_col;  // structural columns with a finite width cap
  std::vector<double> caps;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);

  for (int j = 0; j < nv; ++j) {
    const Eigen::VectorXd col = combined_col(j);
    if (finite(lo[j]) && lo[j] == hi[j]) {  // fixed: fold into rhs
      b -= lo[j] * col;
      continue;
    }
    if (finite(lo[j])) {
      b -= lo[j] * col;
      columns.push_back({j, 1.0, lo[j], false});
      if (finite(hi[j])) {
        capped_col.push_back(static_cast<int>(columns.size()) - 1);
        caps.push_back(hi[j] - lo[j]);
      }
    } else if (finite(hi[j])) {  // mirrored: v = hi - w
      b -= hi[j] * col;
      columns.push_back({j, -1.0, hi[j], false});
    } else {  // free: v = w+ - w-
      columns.push_back({j, 1.0, 0.0, true});
      columns.push_back({j, -1.0, 0.0, true});
    }
  }

  const int nw = static_cast<int>(columns.size());
  const int extra = static_cast<int>(capped_col.size());
  const int rows = m + extra;
  const int cols = nw + extra;         // structural + cap slacks
  const int cols_total = cols + rows;  // + artificials

  // Full standard-form matrix and rhs (kept for dual extraction).
  Eigen::MatrixXd sf = Eigen::MatrixXd::Zero(rows, cols_total);
  Eigen::VectorXd rhs(rows);
  Eigen::VectorXd w_cost = Eigen::VectorXd::Zero(cols_total);
  for (int k = 0; k < nw; ++k) {
    sf.block(0, k, m, 1) = columns[k].scale * combined_col(columns[k].var);
    w_cost(k) = cost[columns[k].var] * columns[k].scale;
  }
  rhs.head(m) = b;
  for (int e = 0; e < extra; ++e) {
    sf(m + e, capped_col[e]) = 1.0;
    sf(m + e, nw + e) = 1.0;
    rhs(m + e) = caps[e];
  }
  std::vector<double> row_sign(rows, 1.0);
  for (int i = 0; i < rows; ++i) {
    if (rhs(i) < 0.0) {
      sf.row(i) *= -1.0;
      rhs(i) = -rhs(i);
      row_sign[i] = -1.0;
    }
    sf(i, cols + i) = 1.0;  // artificial, added after the sign flip
  }

  Tableau tab;
  tab.rows = rows;
  tab.cols_total = cols_total;
  tab.T = Eigen::MatrixXd::Zero(rows + 1, cols_total + 1);
  tab.T.topLeftCorner(rows, cols_total) = sf;
  tab.T.col(cols_total).head(rows) = rhs;
  tab.basis.resize(rows);
  for (int i = 0; i < rows; ++i) tab.basis[i] = cols + i;

  // Phase 1: minimize the artificial sum. After pricing the artificial basis
  // out, the rhs cell of the cost row holds -(phase-1 objective).
  for (int i = 0; i < rows; ++i) tab.T(rows, cols + i) = 1.0;
  for (int i = 0; i < rows; ++i) tab.T.row(rows) -= tab.T.row(i);

  const int max_iter = 20000 + 50 * (rows + cols_total);
  bool hit_cap = false;
  SolveReport rep;

  if (!tab.run(cols, max_iter, hit_cap)) throw SolverError("lp: phase-1 unbounded (internal error)");
  if (hit_cap) {
    rep.status = SolveStatus::MaxIterations;
    rep.iterations = tab.iterations;
    return rep;
  }
  double phase1 = -tab.T(rows, cols_total);
  if (phase1 > std::max(tol, 1e-7)) {
    rep.status = SolveStatus::Infeasible;
    rep.iterations = tab.iterations;
    rep.objective = phase1;  // phase-1 certificate value
    return rep;
  }

  // Drive basic artificials out where a structural pivot exists; rows that
  // stay artificial are redundant and inert (all structural coefficients 0).
  for (int i = 0; i < rows; ++i) {
    if (tab.basis[i] >= cols) {
      for (int j = 0; j < cols; ++j) {
        if (std::abs(tab.T(i, j)) > 1e-7) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2: real objective, priced out against the current basis.
  tab.T.row(rows).setZero();
  tab.T.row(rows).head(cols_total) = w_cost.transpose();
  for (int i = 0; i < rows; ++i) {
    double f = tab.T(rows, tab.basis[i]);
    if (f != 0.0) tab.T.row(rows) -= f * tab.T.row(i);
  }

  bool ok = tab.run(cols, max_iter, hit_cap);
  rep.iterations = tab.iterations;
  if (!ok) throw SolverError("lp: objective unbounded below");
  if (hit_cap) {
    rep.status = SolveStatus::MaxIterations;
    return rep;
  }

  // Recover combined-variable values, then x.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(cols_total);
  for (int i = 0; i < rows; ++i) w(tab.basis[i]) = tab.rhs(i);
  Eigen::VectorXd v(nv);
  for (int j = 0; j < nv; ++j) v(j) = (finite(lo[j]) && lo[j] == hi[j]) ? lo[j] : 0.0;
  for (int k = 0; k < nw; ++k) {
    const auto& cm = columns[k];
    if (cm.split_part)
      v(cm.var) += cm.scale * w(k);
    else
      v(cm.var) = cm.shift + cm.scale * w(k);
  }

  rep.solution = v.head(n);
  rep.objective = lp.objective.dot(rep.solution);

  // Primal residual: worst violation over row and variable bounds.
  Eigen::VectorXd ax = lp.A * rep.solution;
  double prim = 0.0;
  for (int i = 0; i < m; ++i) {
    prim = std::max(prim, lp.row_lower[i] - ax(i));
    prim = std::max(prim, ax(i) - lp.row_upper[i]);
  }
  for (int j = 0; j < n; ++j) {
    prim = std::max(prim, lp.var_lower[j] - rep.solution(j));
    prim = std::max(prim, rep.solution(j) - lp.var_upper[j]);
  }
  rep.primal_residual = std::max(0.0, prim);

  // Row duals from the final basis: solve B'y = c_B, then map back. The
  // multiplier on A_i x - s_i = 0 is -row_sign_i * y_i.
  Eigen::MatrixXd B(rows, rows);
  Eigen::VectorXd cb(rows);
  for (int i = 0; i < rows; ++i) {
    B.col(i) = sf.col(tab.basis[i]);
    cb(i) = w_cost(tab.basis[i]);
  }
  Eigen::VectorXd y_sf = B.transpose().colPivHouseholderQr().solve(cb);
  rep.row_duals.resize(m);
  for (int i = 0; i < m; ++i) rep.row_duals(i) = -row_sign[i] * y_sf(i);

  // Duality gap via the Lagrangian bound g(y) = inf_{x,s} c'x + y'(Ax - s).
  Eigen::VectorXd reduced = lp.objective + lp.A.transpose() * rep.row_duals;
  double g = 0.0;
  for (int j = 0; j < n && finite(g); ++j)
    g += box_inf(reduced(j), lp.var_lower[j], lp.var_upper[j]);
  for (int i = 0; i < m && finite(g); ++i)
    g += box_inf(-rep.row_duals(i), lp.row_lower[i], lp.row_upper[i]);
  rep.dual_residual = finite(g) ? std::abs(rep.objective - g) : kInf;

  rep.status = SolveStatus::Optimal;
  return rep;
}

void QuadraticProgram::validate() const {
  const int n = num_vars();
  const int m = num_rows();
  require(Q.rows() == n && Q.cols() == n, "qp: Q dimension mismatch");
  require(A.cols() == n || m == 0, "qp: A dimension mismatch");
  require(static_cast<int>(row_lower.size()) == m && static_cast<int>(row_upper.size()) == m,
          "qp: row bound count mismatch");
  double scale = std::max(1.0, Q.size() ? Q.cwiseAbs().maxCoeff() : 0.0);
  if (Q.size())
    require((Q - Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "qp: Q not symmetric");
}

SolveReport solve_qp(const QuadraticProgram& qp, const QpOptions& opts) {
  qp.validate();
  const int n = qp.num_vars();
  const int m = qp.num_rows();

  for (int i = 0; i < m; ++i) {
    if (qp.row_lower[i] > qp.row_upper[i]) {
      SolveReport rep;
      rep.status = SolveStatus::Infeasible;
      return rep;
    }
  }

  // Indefiniteness check via pivoted LDL'.
  {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(qp.Q);
    double scale = std::max(1.0, qp.Q.cwiseAbs().maxCoeff());
    if (ldlt.vectorD().minCoeff() < -1e-8 * scale)
      throw InputError("qp: Q is not positive semidefinite");
  }

  const double rho = opts.rho;
  Eigen::MatrixXd K = qp.Q + opts.sigma * Eigen::MatrixXd::Identity(n, n);
  if (m > 0) K += rho * qp.A.transpose() * qp.A;
  Eigen::LDLT<Eigen::MatrixXd> kkt(K);
  if (kkt.info() != Eigen::Success) throw SolverError("qp: KKT factorization failed");

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z(m), y = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    double l = qp.row_lower[i], u = qp.row_upper[i];
    if (finite(l) && finite(u))
      z(i) = 0.5 * (l + u);
    else
      z(i) = finite(l) ? l : (finite(u) ? u : 0.0);
  }

  SolveReport rep;
  int it = 0;
  while (it < opts.max_iter) {
    Eigen::VectorXd rhs = opts.sigma * x - qp.q;
    if (m > 0) rhs += qp.A.transpose() * (rho * z - y);
    x = kkt.solve(rhs);
    ++it;

    double r_prim = 0.0, r_dual = 0.0, prim_scale = 1.0, dual_scale = 1.0;
    if (m > 0) {
      Eigen::VectorXd axv = qp.A * x;
      Eigen::VectorXd z_new = axv + y / rho;
      for (int i = 0; i < m; ++i) z_new(i) = std::clamp(z_new(i), qp.row_lower[i], qp.row_upper[i]);
      y += rho * (axv - z_new);
      z = z_new;

      if (it % opts.check_interval != 0 && it < opts.max_iter) continue;
      r_prim = (axv - z).cwiseAbs().maxCoeff();
      prim_scale = std::max({1.0, axv.cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff()});
      Eigen::VectorXd qx = qp.Q * x;
      Eigen::VectorXd aty = qp.A.transpose() * y;
      r_dual = (qx + qp.q + aty).cwiseAbs().maxCoeff();
      dual_scale = std::max({1.0, qx.cwiseAbs().maxCoeff(), qp.q.cwiseAbs().maxCoeff(),
                             aty.cwiseAbs().maxCoeff()});
    } else {
      Eigen::VectorXd qx = qp.Q * x;
      r_dual = (qx + qp.q).cwiseAbs().maxCoeff();
      dual_scale = std::max({1.0, qx.cwiseAbs().maxCoeff(), qp.q.cwiseAbs().maxCoeff()});
    }

    rep.primal_residual = r_prim;
    rep.dual_residual = r_dual;
    if (r_prim <= opts.tol_abs + opts.tol_rel * prim_scale &&
        r_dual <= opts.tol_abs + opts.tol_rel * dual_scale) {
      rep.status = SolveStatus::Optimal;
      break;
    }
  }

  rep.iterations = it;
  rep.solution = x;
  rep.objective = 0.5 * x.dot(qp.Q * x) + qp.q.dot(x);
  rep.row_duals = y;
  return rep;
}

}  // namespace tariff::numerics
