#include "tariff/cnone.hpp"

#include <algorithm>
#include <cmath>

namespace tariff::cnone {

namespace {

constexpr int H = kSlots;
constexpr int kParamsPerHour = H + 1;  // intercept + 24 elasticities
constexpr int kNumParams = H * kParamsPerHour;

int param_index(int hour, int j) { return hour * kParamsPerHour + j; }  // j=0: intercept
int beta_index(int hour, int l) { return param_index(hour, l + 1); }

}  // namespace

void AggregateDemandModel::validate() const {
  require(alpha.size() == H && beta.rows() == H && beta.cols() == H,
          "aggregate model: dimension mismatch");
  for (int h = 0; h < H; ++h) {
    require(beta(h, h) <= -kSelfMargin, "aggregate model: self-elasticity not negative");
    for (int l = 0; l < H; ++l)
      if (l != h) require(beta(h, l) >= 0.0, "aggregate model: cross-elasticity negative");
    require(beta.col(h).sum() <= 0.0, "aggregate model: column sum positive");
  }
}

void DemandHistory::validate() const {
  require(lambda >= 0.0 && lambda <= 1.0, "history: forgetting factor outside [0,1]");
  require(prices.size() == demand_kwh.size(), "history: price/demand day count mismatch");
  for (std::size_t d = 0; d < prices.size(); ++d) {
    require(static_cast<int>(prices[d].size()) == H, "history: price vector not 24 slots");
    require(static_cast<int>(demand_kwh[d].size()) == H, "history: demand vector not 24 slots");
    for (double v : demand_kwh[d]) require(v >= 0.0, "history: negative consumption");
  }
}

AggregateFitResult fit_aggregate_demand(const DemandHistory& history,
                                        const numerics::QpOptions& opts) {
  history.validate();
  const int D = history.days();
  require(D >= kParamsPerHour, "aggregate fit: need at least 25 days of history");

  // Day weights lambda^(D-d), normalized to sum 1; normalization rescales the
  // objective only, leaving the argmin unchanged.
  Eigen::VectorXd w(D);
  for (int d = 0; d < D; ++d) w(d) = std::pow(history.lambda, D - 1 - d);
  double wsum = w.sum();
  require(wsum > 0.0, "aggregate fit: zero total weight");
  w /= wsum;

  // Shared weighted design across the 24 per-hour regressions.
  Eigen::MatrixXd X(D, kParamsPerHour);
  for (int d = 0; d < D; ++d) {
    X(d, 0) = 1.0;
    for (int l = 0; l < H; ++l) X(d, l + 1) = history.prices[d][l];
  }
  Eigen::MatrixXd G = X.transpose() * (w.asDiagonal() * X);

  numerics::QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Zero(kNumParams, kNumParams);
  qp.q = Eigen::VectorXd::Zero(kNumParams);
  Eigen::VectorXd y(D);
  for (int h = 0; h < H; ++h) {
    qp.Q.block(h * kParamsPerHour, h * kParamsPerHour, kParamsPerHour, kParamsPerHour) = 2.0 * G;
    for (int d = 0; d < D; ++d) y(d) = history.demand_kwh[d][h];
    qp.q.segment(h * kParamsPerHour, kParamsPerHour) = -2.0 * X.transpose() * (w.asDiagonal() * y);
  }

  // Constraint rows: one sign row per elasticity plus one coupled sum per
  // price column.
  const int rows = H * H + H;
  qp.A = Eigen::MatrixXd::Zero(rows, kNumParams);
  qp.row_lower.resize(rows);
  qp.row_upper.resize(rows);
  int r = 0;
  for (int h = 0; h < H; ++h) {
    for (int l = 0; l < H; ++l, ++r) {
      qp.A(r, beta_index(h, l)) = 1.0;
      if (l == h) {
        qp.row_lower(r) = -numerics::kInf;
        qp.row_upper(r) = -kSelfMargin;
      } else {
        qp.row_lower(r) = 0.0;
        qp.row_upper(r) = numerics::kInf;
      }
    }
  }
  for (int col = 0; col < H; ++col, ++r) {
    for (int h = 0; h < H; ++h) qp.A(r, beta_index(h, col)) = 1.0;
    qp.row_lower(r) = -numerics::kInf;
    qp.row_upper(r) = 0.0;
  }

  AggregateFitResult out;
  out.report = numerics::solve_qp(qp, opts);
  if (out.report.status == numerics::SolveStatus::Infeasible)
    throw SolverError("aggregate fit: QP reported infeasible");

  out.model.alpha.resize(H);
  out.model.beta.resize(H, H);
  for (int h = 0; h < H; ++h) {
    out.model.alpha(h) = out.report.solution(param_index(h, 0));
    for (int l = 0; l < H; ++l) out.model.beta(h, l) = out.report.solution(beta_index(h, l));
  }

  // Project the active constraints so the invariants hold exactly: clamp the
  // signs, then absorb any residual column-sum excess into the diagonal.
  auto& beta = out.model.beta;
  for (int h = 0; h < H; ++h) {
    beta(h, h) = std::min(beta(h, h), -kSelfMargin);
    for (int l = 0; l < H; ++l)
      if (l != h) beta(h, l) = std::max(beta(h, l), 0.0);
  }
  for (int col = 0; col < H; ++col) {
    for (int guard = 0; guard < 8; ++guard) {
      double excess = beta.col(col).sum();
      if (excess <= 0.0) break;
      beta(col, col) -= excess;
    }
  }
  out.model.validate();
  return out;
}

Eigen::VectorXd evaluate_linear(const AggregateDemandModel& model, const PriceVector& prices) {
  require(static_cast<int>(prices.size()) == H, "aggregate predict: price vector not 24 slots");
  Eigen::VectorXd p(H);
  for (int l = 0; l < H; ++l) p(l) = prices[l];
  return model.alpha + model.beta * p;
}

std::vector<double> predict_aggregate(const AggregateDemandModel& model,
                                      const PriceVector& prices) {
  Eigen::VectorXd raw = evaluate_linear(model, prices);
  std::vector<double> out(H);
  for (int h = 0; h < H; ++h) out[h] = std::max(0.0, raw(h));
  return out;
}

double weighted_residual(const AggregateDemandModel& model, const DemandHistory& history) {
  const int D = history.days();
  double total = 0.0;
  for (int d = 0; d < D; ++d) {
    Eigen::VectorXd pred = evaluate_linear(model, history.prices[d]);
    double wd = std::pow(history.lambda, D - 1 - d);
    for (int h = 0; h < H; ++h) {
      double e = pred(h) - history.demand_kwh[d][h];
      total += wd * e * e;
    }
  }
  return total;
}

}  // namespace tariff::cnone
