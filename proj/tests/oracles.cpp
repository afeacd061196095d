#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracles {

namespace {

constexpr std::int64_t kIntMax = std::numeric_limits<std::int64_t>::max();

// Visits every size-k subset of 0..n-1.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  if (k == 0) {
    fn(pick);
    return;
  }
  for (;;) {
    fn(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

std::int64_t best_interruptible_cost(const std::vector<std::int64_t>& price_h, int full_slots,
                                     std::int64_t rated_deci, std::int64_t remainder_deci) {
  const int n = static_cast<int>(price_h.size());
  std::int64_t best = kIntMax;
  for_each_subset(n, full_slots, [&](const std::vector<int>& full) {
    std::int64_t base = 0;
    for (int s : full) base += price_h[s] * rated_deci;
    if (remainder_deci == 0) {
      best = std::min(best, base);
      return;
    }
    std::vector<bool> taken(n, false);
    for (int s : full) taken[s] = true;
    for (int s = 0; s < n; ++s) {
      if (!taken[s]) best = std::min(best, base + price_h[s] * remainder_deci);
    }
  });
  return best;
}

std::int64_t best_non_interruptible_cost(const std::vector<std::int64_t>& price_h, int run,
                                         std::int64_t rated_deci) {
  const int n = static_cast<int>(price_h.size());
  std::int64_t best = kIntMax;
  for (int start = 0; start + run <= n; ++start) {
    std::int64_t cost = 0;
    for (int s = start; s < start + run; ++s) cost += price_h[s] * rated_deci;
    best = std::min(best, cost);
  }
  return best;
}

std::int64_t best_curtailable_cost(const std::vector<std::int64_t>& price_h,
                                   std::int64_t level_min_deci, std::int64_t level_max_deci,
                                   std::int64_t total_deci) {
  const int n = static_cast<int>(price_h.size());
  std::int64_t best = kIntMax;
  // Vertices of {x: lo <= x <= hi, sum x = total}: all slots at a bound except
  // at most one fractional slot.
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    std::int64_t cost = 0, sum = 0;
    for (int s = 0; s < n; ++s) {
      std::int64_t level = (mask >> s) & 1 ? level_max_deci : level_min_deci;
      cost += price_h[s] * level;
      sum += level;
    }
    if (sum == total_deci) best = std::min(best, cost);
    for (int f = 0; f < n; ++f) {
      std::int64_t f_level = (mask >> f) & 1 ? level_max_deci : level_min_deci;
      std::int64_t need = total_deci - (sum - f_level);
      if (need < level_min_deci || need > level_max_deci) continue;
      best = std::min(best, cost - price_h[f] * f_level + price_h[f] * need);
    }
  }
  return best;
}

std::int64_t profile_cost(const std::vector<std::int64_t>& price_h,
                          const std::vector<double>& kwh, int window_first) {
  std::int64_t cost = 0;
  for (std::size_t i = 0; i < price_h.size(); ++i)
    cost += price_h[i] * std::llround(kwh[window_first + i] * 10.0);
  return cost;
}

double lp_vertex_optimum(const tariff::numerics::LinearProgram& lp, double feas_tol) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  // Collect every bounding hyperplane a'x = b.
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  auto add = [&](const Eigen::VectorXd& a, double b) {
    if (std::isfinite(b)) {
      normals.push_back(a);
      offsets.push_back(b);
    }
  };
  for (int i = 0; i < m; ++i) {
    add(lp.A.row(i), lp.row_lower[i]);
    if (lp.row_lower[i] != lp.row_upper[i]) add(lp.A.row(i), lp.row_upper[i]);
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1.0;
    add(e, lp.var_lower[j]);
    if (lp.var_lower[j] != lp.var_upper[j]) add(e, lp.var_upper[j]);
  }

  const int planes = static_cast<int>(normals.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);

  auto feasible = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd ax = lp.A * x;
    for (int i = 0; i < m; ++i)
      if (ax(i) < lp.row_lower[i] - feas_tol || ax(i) > lp.row_upper[i] + feas_tol) return false;
    for (int j = 0; j < n; ++j)
      if (x(j) < lp.var_lower[j] - feas_tol || x(j) > lp.var_upper[j] + feas_tol) return false;
    return true;
  };

  for_each_subset(planes, n, [&](const std::vector<int>& sel) {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
      M.row(r) = normals[sel[r]].transpose();
      b(r) = offsets[sel[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) return;
    Eigen::VectorXd x = lu.solve(b);
    if (feasible(x)) best = std::min(best, lp.objective.dot(x));
  });
  return best;
}

Eigen::VectorXd projected_gradient_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                      int max_iter, double tol) {
  const int n = static_cast<int>(q.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  double lip = std::max(1e-12, eig.eigenvalues().maxCoeff());
  double eta = 1.0 / lip;

  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = std::clamp(0.0, lo(j), hi(j));
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd g = Q * x + q;
    Eigen::VectorXd next = x - eta * g;
    for (int j = 0; j < n; ++j) next(j) = std::clamp(next(j), lo(j), hi(j));
    double step = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (step < tol) break;
  }
  return x;
}

}  // namespace oracles
