#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tariff/common.hpp"
#include "tariff/numerics.hpp"

namespace tariff::cnone {

// Strict-inequality margin used to keep the feasible set closed:
// self-elasticities satisfy beta_hh <= -kSelfMargin.
inline constexpr double kSelfMargin = 1e-9;

// Aggregated linear demand of the unmetered pool: demand_h(p) =
// alpha_h + sum_l beta(h, l) * p_l, with negative self-elasticities,
// nonnegative cross-elasticities, and nonpositive column sums so that a
// uniform price increase never raises total demand.
struct AggregateDemandModel {
  Eigen::VectorXd alpha;  // kSlots intercepts (kWh)
  Eigen::MatrixXd beta;   // kSlots x kSlots elasticities (kWh per cent)

  void validate() const;
};

struct DemandHistory {
  std::vector<PriceVector> prices;            // one 24-vector per day
  std::vector<std::vector<double>> demand_kwh;  // matching consumption
  double lambda = 1.0;  // forgetting factor; day d gets weight lambda^(D-d)

  int days() const { return static_cast<int>(prices.size()); }
  void validate() const;
};

struct AggregateFitResult {
  AggregateDemandModel model;
  numerics::SolveReport report;
};

// Weighted least squares over all 24 x 25 coefficients as a single QP; the
// column-sum constraints couple the per-hour regressions. Active constraints
// are projected so the returned model satisfies the invariants exactly.
AggregateFitResult fit_aggregate_demand(const DemandHistory& history,
                                        const numerics::QpOptions& opts = {});

// Linear evaluation clamped at zero per slot.
std::vector<double> predict_aggregate(const AggregateDemandModel& model,
                                      const PriceVector& prices);

// Unclamped evaluation, used by monotonicity checks.
Eigen::VectorXd evaluate_linear(const AggregateDemandModel& model, const PriceVector& prices);

// Sum of weighted squared residuals of a (not necessarily fitted) model
// against a history; lets tests compare candidate fits.
double weighted_residual(const AggregateDemandModel& model, const DemandHistory& history);

}  // namespace tariff::cnone
