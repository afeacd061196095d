#include <doctest.h>

#include <cmath>
#include <limits>

#include "tariff/baseline.hpp"

using namespace tariff;
using namespace tariff::baseline;

namespace {

// Price-insensitive pool: the same demand no matter the prices.
ga::FitnessFn fixed_demand_fitness(const std::vector<double>& demand,
                                   const retailer::CostModel& cost,
                                   const retailer::MarketLimits& limits) {
  return [demand, cost, limits](const PriceVector& prices) {
    retailer::GroupResponse group;
    group.kwh = demand;
    group.bill_cents = 0.0;
    for (int h = 0; h < kSlots; ++h) group.bill_cents += prices[h] * demand[h];
    std::vector<retailer::GroupResponse> responses{group};
    return retailer::evaluate_prices(prices, responses, cost, limits);
  };
}

}  // namespace

TEST_CASE("baseline: price-insensitive demand converges in two rounds") {
  retailer::CostModel cost = retailer::CostModel::uniform(0.005, 5.0, 0.0);
  retailer::MarketLimits limits;
  limits.revenue_cap_cents = 1000.0;
  std::vector<double> demand(kSlots, 5.0);  // 120 kWh/day
  auto fitness = fixed_demand_fitness(demand, cost, limits);

  PriceVector initial(kSlots, limits.price_min_cents);
  auto result = iterative_optimize(initial, fitness, cost, limits, 0.01, 50);

  CHECK(result.rounds == 2);
  // t = (1000 - 6 * 120) / (8 * 120) -> p = 8.3333 rounded to the grid
  for (double p : result.prices) CHECK(p == doctest::Approx(8.33).epsilon(1e-12));
  CHECK(result.eval.revenue_cents == doctest::Approx(8.33 * 120.0).epsilon(1e-9));
  CHECK(result.eval.violation == 0.0);
}

TEST_CASE("baseline: infinite tolerance stops after one round") {
  retailer::CostModel cost = retailer::CostModel::uniform(0.005, 5.0, 0.0);
  retailer::MarketLimits limits;
  limits.revenue_cap_cents = 2000.0;
  std::vector<double> demand(kSlots, 3.0);
  auto fitness = fixed_demand_fitness(demand, cost, limits);

  PriceVector initial(kSlots, 7.0);
  auto result =
      iterative_optimize(initial, fitness, cost, limits,
                         std::numeric_limits<double>::infinity(), 50);
  CHECK(result.rounds == 1);
  // Best of the initial prices and their one-step best response.
  auto initial_eval = fitness(initial);
  CHECK(result.eval.profit_cents >= initial_eval.profit_cents - 1e-9);
}

TEST_CASE("baseline: closed-form inner step agrees with the LP route") {
  retailer::MarketLimits limits;
  limits.revenue_cap_cents = 1500.0;
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> demand(kSlots);
    double total = 0.0;
    for (auto& d : demand) {
      d = rng.uniform(0.5, 6.0);
      total += d;
    }
    auto p_uniform = inner_price_update(demand, limits, false);
    auto p_lp = inner_price_update(demand, limits, true);

    double rev_uniform = 0.0, rev_lp = 0.0;
    for (int h = 0; h < kSlots; ++h) {
      rev_uniform += p_uniform[h] * demand[h];
      rev_lp += p_lp[h] * demand[h];
    }
    double attainable = std::min(limits.revenue_cap_cents, limits.price_max_cents * total);
    // Both sit at the cap (or the price ceiling) up to 0.01-cent rounding.
    CHECK(rev_uniform <= limits.revenue_cap_cents + 1e-9);
    CHECK(rev_uniform >= attainable - 0.01 * total - 1e-9);
    CHECK(rev_lp <= limits.revenue_cap_cents + 0.01 * total + 1e-9);
    CHECK(rev_lp >= attainable - 0.01 * total - 1e-9);
  }
}

TEST_CASE("baseline: restarts keep the Deb-best run and stay feasible") {
  retailer::CostModel cost = retailer::CostModel::uniform(0.005, 5.0, 0.0);
  retailer::MarketLimits limits;
  limits.revenue_cap_cents = 900.0;
  std::vector<double> demand(kSlots, 4.0);
  auto fitness = fixed_demand_fitness(demand, cost, limits);

  BaselineConfig config;
  config.restarts = 3;
  config.seed = 17;
  auto result = iterative_optimize_restarts(config, fitness, cost, limits);
  // Uniform price floor is feasible here, so the result must be too.
  CHECK(result.eval.violation == 0.0);
  CHECK(result.eval.revenue_cents <= limits.revenue_cap_cents + 1e-9);
}

TEST_CASE("baseline: initial prices outside the bounds are rejected") {
  retailer::CostModel cost = retailer::CostModel::uniform(0.005, 5.0, 0.0);
  retailer::MarketLimits limits;
  std::vector<double> demand(kSlots, 1.0);
  auto fitness = fixed_demand_fitness(demand, cost, limits);
  PriceVector bad(kSlots, 5.0);  // below the 6-cent floor
  CHECK_THROWS_AS(iterative_optimize(bad, fitness, cost, limits, 0.01, 10), InputError);
}
