#pragma once

#include <span>
#include <vector>

#include "tariff/common.hpp"

namespace tariff::retailer {

// Hourly procurement cost a*L^2 + b*L + c, convex increasing for a > 0.
struct CostModel {
  std::vector<double> a;  // cents/kWh^2
  std::vector<double> b;  // cents/kWh
  std::vector<double> c;  // cents

  static CostModel uniform(double a, double b, double c, int slots = kSlots);
  double slot_cost(int h, double load_kwh) const;
  void validate() const;
};

struct MarketLimits {
  double price_min_cents = 6.0;
  double price_max_cents = 14.0;
  double capacity_kwh = 1e9;        // per-slot supply cap
  double revenue_cap_cents = 35000; // daily revenue cap
  void validate() const;
};

// Demand and bill of one customer group under a candidate price vector.
struct GroupResponse {
  std::vector<double> kwh;
  double bill_cents = 0.0;
};

struct MarketEvaluation {
  std::vector<double> demand_kwh;  // per-slot aggregate
  double revenue_cents = 0.0;
  double cost_cents = 0.0;
  double profit_cents = 0.0;
  double violation = 0.0;  // normalized positive excess over capacity/revenue caps

  bool feasible() const { return violation == 0.0; }
};

// Sums group demands, prices the revenue from group bills, and accumulates
// the relative constraint excesses into a single violation magnitude.
MarketEvaluation evaluate_prices(const PriceVector& prices,
                                 std::span<const GroupResponse> responses,
                                 const CostModel& cost, const MarketLimits& limits);

}  // namespace tariff::retailer
