#include "tariff/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "tariff/numerics.hpp"

namespace tariff::baseline {

namespace {

bool strictly_better(const retailer::MarketEvaluation& a, const retailer::MarketEvaluation& b) {
  return ga::deb_better(a, b) && !ga::deb_better(b, a);
}

double round_to_grid(double cents) { return std::round(cents * 100.0) / 100.0; }

}  // namespace

PriceVector inner_price_update(const std::vector<double>& demand_kwh,
                               const retailer::MarketLimits& limits, bool via_lp) {
  const int H = static_cast<int>(demand_kwh.size());
  const double span = limits.price_max_cents - limits.price_min_cents;
  double total = 0.0;
  for (double d : demand_kwh) total += d;

  if (via_lp) {
    // max p'D == min -p'D over the price box with the revenue cap row.
    numerics::LinearProgram lp;
    lp.objective.resize(H);
    lp.var_lower.resize(H);
    lp.var_upper.resize(H);
    lp.A = Eigen::MatrixXd::Zero(1, H);
    for (int h = 0; h < H; ++h) {
      double d = demand_kwh[h];
      lp.objective(h) = -d;
      lp.A(0, h) = d;
      lp.var_lower(h) = limits.price_min_cents;
      lp.var_upper(h) = limits.price_max_cents;
    }
    lp.row_lower.resize(1);
    lp.row_upper.resize(1);
    lp.row_lower(0) = -numerics::kInf;
    lp.row_upper(0) = limits.revenue_cap_cents;
    auto rep = numerics::solve_lp(lp);
    if (rep.status != numerics::SolveStatus::Optimal)
      throw SolverError("baseline: inner LP failed: " + numerics::to_string(rep.status));
    PriceVector p(H);
    for (int h = 0; h < H; ++h) p[h] = round_to_grid(rep.solution(h));
    return p;
  }

  // Uniform scaling p = p_min + t (p_max - p_min): revenue is linear in t,
  // so t is the point where the cap binds, clipped to [0, 1].
  double t = 1.0;
  if (total > 0.0 && span > 0.0) {
    t = (limits.revenue_cap_cents - limits.price_min_cents * total) / (span * total);
    t = std::clamp(t, 0.0, 1.0);
  }
  PriceVector p(H, round_to_grid(limits.price_min_cents + t * span));
  return p;
}

BaselineResult iterative_optimize(const PriceVector& initial_prices, const ga::FitnessFn& fitness,
                                  const retailer::CostModel& cost,
                                  const retailer::MarketLimits& limits, double tol_cents,
                                  int max_rounds) {
  cost.validate();
  limits.validate();
  for (double p : initial_prices)
    require(p >= limits.price_min_cents - 1e-9 && p <= limits.price_max_cents + 1e-9,
            "baseline: initial prices outside bounds");

  BaselineResult result;
  PriceVector prices = initial_prices;
  bool have_best = false;

  for (int round = 1; round <= max_rounds; ++round) {
    auto eval = fitness(prices);
    if (!have_best || strictly_better(eval, result.eval)) {
      result.eval = eval;
      result.prices = prices;
      have_best = true;
    }
    result.trace.push_back({round, prices, eval.profit_cents, eval.violation});
    result.rounds = round;

    PriceVector next = inner_price_update(eval.demand_kwh, limits, false);
    double change = 0.0;
    for (std::size_t h = 0; h < prices.size(); ++h)
      change = std::max(change, std::abs(next[h] - prices[h]));
    prices = std::move(next);
    if (change <= tol_cents) break;
  }

  // The final prices earned an inner solve but not yet an evaluation.
  auto eval = fitness(prices);
  if (!have_best || strictly_better(eval, result.eval)) {
    result.eval = eval;
    result.prices = prices;
  }
  return result;
}

BaselineResult iterative_optimize_restarts(const BaselineConfig& config,
                                           const ga::FitnessFn& fitness,
                                           const retailer::CostModel& cost,
                                           const retailer::MarketLimits& limits) {
  require(config.restarts >= 1, "baseline: need at least one restart");
  Rng rng(config.seed);
  BaselineResult best;
  for (int r = 0; r < config.restarts; ++r) {
    PriceVector initial(kSlots, limits.price_min_cents);
    if (r > 0) {
      for (auto& p : initial)
        p = round_to_grid(rng.uniform(limits.price_min_cents, limits.price_max_cents));
    }
    auto run = iterative_optimize(initial, fitness, cost, limits, config.tol_cents,
                                  config.max_rounds);
    if (r == 0 || strictly_better(run.eval, best.eval)) best = run;
  }
  return best;
}

}  // namespace tariff::baseline
