#pragma once

#include <cstdint>
#include <vector>

#include "tariff/ga.hpp"
#include "tariff/retailer.hpp"

namespace tariff::baseline {

struct BaselineConfig {
  double tol_cents = 0.01;  // max-norm price change for termination
  int max_rounds = 50;
  int restarts = 3;
  bool lp_inner = false;  // cross-check the closed-form inner step via the LP solver
  std::uint64_t seed = 0;
};

struct RoundRecord {
  int round = 0;
  PriceVector prices;
  double profit_cents = 0.0;
  double violation = 0.0;
};

struct BaselineResult {
  PriceVector prices;
  retailer::MarketEvaluation eval;
  int rounds = 0;
  std::vector<RoundRecord> trace;
};

// Alternates customer response with the retailer's fixed-demand inner
// problem. With demands fixed the inner problem is a revenue-capped LP whose
// uniform-scaling solution is exact; iteration stops when prices move less
// than `tol_cents` in max-norm. Returns the Deb-best evaluation seen.
BaselineResult iterative_optimize(const PriceVector& initial_prices,
                                  const ga::FitnessFn& fitness,
                                  const retailer::CostModel& cost,
                                  const retailer::MarketLimits& limits, double tol_cents,
                                  int max_rounds);

// Runs restart 0 from the uniform price floor and the remaining restarts
// from seeded random price vectors; returns the best run.
BaselineResult iterative_optimize_restarts(const BaselineConfig& config,
                                           const ga::FitnessFn& fitness,
                                           const retailer::CostModel& cost,
                                           const retailer::MarketLimits& limits);

// Inner step: maximize sum_h p_h D_h subject to price bounds and the revenue
// cap, with demand fixed. Exposed for the LP cross-check.
PriceVector inner_price_update(const std::vector<double>& demand_kwh,
                               const retailer::MarketLimits& limits, bool via_lp = false);

}  // namespace tariff::baseline
