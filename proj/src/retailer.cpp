#include "tariff/retailer.hpp"

#include <algorithm>

namespace tariff::retailer {

CostModel CostModel::uniform(double a, double b, double c, int slots) {
  CostModel m;
  m.a.assign(slots, a);
  m.b.assign(slots, b);
  m.c.assign(slots, c);
  return m;
}

double CostModel::slot_cost(int h, double load_kwh) const {
  return a[h] * load_kwh * load_kwh + b[h] * load_kwh + c[h];
}

void CostModel::validate() const {
  require(a.size() == b.size() && b.size() == c.size(), "cost model: coefficient size mismatch");
  for (std::size_t h = 0; h < a.size(); ++h) {
    require(a[h] > 0.0, "cost model: quadratic coefficient must be positive");
    require(b[h] >= 0.0 && c[h] >= 0.0, "cost model: linear/constant coefficients negative");
  }
}

void MarketLimits::validate() const {
  require(price_min_cents <= price_max_cents, "limits: price floor above cap");
  require(capacity_kwh > 0.0, "limits: capacity must be positive");
  require(revenue_cap_cents > 0.0, "limits: revenue cap must be positive");
}

MarketEvaluation evaluate_prices(const PriceVector& prices,
                                 std::span<const GroupResponse> responses,
                                 const CostModel& cost, const MarketLimits& limits) {
  const int H = static_cast<int>(prices.size());
  require(static_cast<int>(cost.a.size()) == H, "evaluate: cost model horizon mismatch");
  cost.validate();
  limits.validate();

  MarketEvaluation ev;
  ev.demand_kwh.assign(H, 0.0);
  for (const auto& group : responses) {
    require(static_cast<int>(group.kwh.size()) == H, "evaluate: group horizon mismatch");
    for (int h = 0; h < H; ++h) ev.demand_kwh[h] += group.kwh[h];
    ev.revenue_cents += group.bill_cents;
  }

  for (int h = 0; h < H; ++h) {
    ev.cost_cents += cost.slot_cost(h, ev.demand_kwh[h]);
    double excess = ev.demand_kwh[h] - limits.capacity_kwh;
    if (excess > 0.0) ev.violation += excess / limits.capacity_kwh;
  }
  double rev_excess = ev.revenue_cents - limits.revenue_cap_cents;
  if (rev_excess > 0.0) ev.violation += rev_excess / limits.revenue_cap_cents;

  ev.profit_cents = ev.revenue_cents - ev.cost_cents;
  return ev;
}

}  // namespace tariff::retailer
