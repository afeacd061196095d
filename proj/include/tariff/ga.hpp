#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tariff/retailer.hpp"

namespace tariff::ga {

struct GaConfig {
  int bits_per_price = 10;   // 2^10 > 800 price steps of 0.01 over [6, 14]
  int population = 300;
  int generations = 300;
  double mutation = 0.005;
  double crossover = 0.9;
  int tournament = 2;
  int elitism = 1;
  std::uint64_t seed = 0;
  int jobs = 0;  // fitness workers; 0 = hardware default

  void validate() const;
};

using Bits = std::vector<std::uint8_t>;

// Per-slot binary groups mapped affinely onto the 0.01-cent price grid;
// all-zero and all-one groups hit the bounds exactly.
PriceVector decode(const Bits& bits, int bits_per_price, const retailer::MarketLimits& limits);

// Deb's feasibility ordering: feasible beats infeasible, feasible pairs
// compare on profit, infeasible pairs on violation. True when `a` wins;
// exact ties go to `a`.
bool deb_better(const retailer::MarketEvaluation& a, const retailer::MarketEvaluation& b);

struct GaTracePoint {
  int generation = 0;
  double best_profit = 0.0;       // best individual so far (Deb order)
  double mean_profit = 0.0;       // population mean
  double feasible_fraction = 0.0;
};

struct GaResult {
  PriceVector best_prices;
  retailer::MarketEvaluation best_eval;
  std::vector<GaTracePoint> trace;
  std::size_t evaluations = 0;  // distinct fitness calls (cache misses)
};

using FitnessFn = std::function<retailer::MarketEvaluation(const PriceVector&)>;

// Binary GA: deterministic tournament selection without replacement (two
// shuffled passes over disjoint groups), uniform crossover, bit-flip
// mutation, elitism. Fitness must be deterministic; results are then
// reproducible for a fixed seed regardless of the worker count. `initial`
// overrides the random starting population (mainly for tests).
GaResult evolve(const GaConfig& config, const retailer::MarketLimits& limits,
                const FitnessFn& fitness, const std::vector<Bits>* initial = nullptr);

}  // namespace tariff::ga
