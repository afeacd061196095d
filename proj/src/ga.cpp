#include "tariff/ga.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace tariff::ga {

namespace {

struct Individual {
  Bits bits;
  PriceVector prices;
  retailer::MarketEvaluation eval;
};

// a strictly precedes b in the Deb order.
bool strictly_better(const retailer::MarketEvaluation& a, const retailer::MarketEvaluation& b) {
  return deb_better(a, b) && !deb_better(b, a);
}

}  // namespace

void GaConfig::validate() const {
  require(bits_per_price >= 1 && bits_per_price <= 30, "ga: bits per price out of range");
  require(population >= 2 && population % 2 == 0, "ga: population size must be even");
  require(tournament >= 2 && population % tournament == 0,
          "ga: population must divide into tournament groups");
  require(mutation >= 0.0 && mutation <= 1.0, "ga: mutation probability outside [0,1]");
  require(crossover >= 0.0 && crossover <= 1.0, "ga: crossover probability outside [0,1]");
  require(generations >= 1, "ga: need at least one generation");
  require(elitism >= 0 && elitism < population, "ga: elitism count out of range");
}

PriceVector decode(const Bits& bits, int bits_per_price, const retailer::MarketLimits& limits) {
  require(static_cast<int>(bits.size()) == bits_per_price * kSlots,
          "ga: chromosome length mismatch");
  const std::int64_t lo = to_hundredths(limits.price_min_cents);
  const std::int64_t span = to_hundredths(limits.price_max_cents) - lo;
  const std::int64_t steps = (std::int64_t{1} << bits_per_price) - 1;

  PriceVector prices(kSlots);
  for (int h = 0; h < kSlots; ++h) {
    std::int64_t g = 0;
    for (int b = 0; b < bits_per_price; ++b)
      g = (g << 1) | bits[h * bits_per_price + b];
    // round-half-up to the nearest 0.01 cent
    std::int64_t hundredths = lo + (2 * g * span + steps) / (2 * steps);
    prices[h] = static_cast<double>(hundredths) / 100.0;
  }
  return prices;
}

bool deb_better(const retailer::MarketEvaluation& a, const retailer::MarketEvaluation& b) {
  const bool fa = a.feasible(), fb = b.feasible();
  if (fa != fb) return fa;
  if (fa) return a.profit_cents >= b.profit_cents;
  return a.violation <= b.violation;
}

GaResult evolve(const GaConfig& config, const retailer::MarketLimits& limits,
                const FitnessFn& fitness, const std::vector<Bits>* initial) {
  config.validate();
  limits.validate();
  const int PN = config.population;
  const int L = config.bits_per_price * kSlots;
  Rng rng(config.seed);

  std::map<Bits, retailer::MarketEvaluation> cache;
  std::size_t evaluations = 0;

  auto evaluate_all = [&](std::vector<Individual>& pop) {
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      pop[i].prices = decode(pop[i].bits, config.bits_per_price, limits);
      auto it = cache.find(pop[i].bits);
      if (it != cache.end())
        pop[i].eval = it->second;
      else if (cache.emplace(pop[i].bits, retailer::MarketEvaluation{}).second)
        missing.push_back(i);
    }
    // Duplicates within the batch share one evaluation slot; fill misses in
    // parallel, then publish sequentially for deterministic cache state.
    std::vector<retailer::MarketEvaluation> fresh(missing.size());
    try {
      parallel_for(missing.size(), config.jobs,
                   [&](std::size_t k) { fresh[k] = fitness(pop[missing[k]].prices); });
    } catch (const std::exception& e) {
      throw SolverError(std::string("ga: fitness evaluation failed: ") + e.what());
    }
    for (std::size_t k = 0; k < missing.size(); ++k)
      cache[pop[missing[k]].bits] = fresh[k];
    evaluations += missing.size();
    for (auto& ind : pop) ind.eval = cache.at(ind.bits);
  };

  std::vector<Individual> pop(PN);
  if (initial) {
    require(static_cast<int>(initial->size()) == PN, "ga: initial population size mismatch");
    for (int i = 0; i < PN; ++i) {
      require(static_cast<int>((*initial)[i].size()) == L, "ga: initial chromosome length mismatch");
      pop[i].bits = (*initial)[i];
    }
  } else {
    for (auto& ind : pop) {
      ind.bits.resize(L);
      for (auto& bit : ind.bits) bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    }
  }
  evaluate_all(pop);

  // Hall of fame carries the elitism slots.
  std::vector<Individual> hall;
  auto update_hall = [&](const Individual& ind) {
    if (config.elitism == 0) return;
    auto pos = hall.begin();
    while (pos != hall.end() && !strictly_better(ind.eval, pos->eval)) ++pos;
    hall.insert(pos, ind);
    if (static_cast<int>(hall.size()) > config.elitism) hall.pop_back();
  };
  for (const auto& ind : pop) update_hall(ind);

  Individual best = pop[0];
  for (int i = 1; i < PN; ++i)
    if (strictly_better(pop[i].eval, best.eval)) best = pop[i];

  GaResult result;
  result.trace.reserve(config.generations);

  for (int gen = 1; gen <= config.generations; ++gen) {
    // Deterministic tournament selection without replacement: k passes over
    // freshly shuffled disjoint groups of k refill PN parents.
    std::vector<int> parents;
    parents.reserve(PN);
    for (int pass = 0; pass < config.tournament; ++pass) {
      std::vector<int> perm(PN);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      for (int g = 0; g < PN; g += config.tournament) {
        int winner = perm[g];
        for (int j = 1; j < config.tournament; ++j) {
          int cand = perm[g + j];
          if (strictly_better(pop[cand].eval, pop[winner].eval)) winner = cand;
        }
        parents.push_back(winner);
      }
    }

    std::vector<Individual> next(PN);
    for (int p = 0; p + 1 < PN; p += 2) {
      Bits a = pop[parents[p]].bits;
      Bits b = pop[parents[p + 1]].bits;
      if (rng.bernoulli(config.crossover)) {
        for (int j = 0; j < L; ++j)
          if (rng.bernoulli(0.5)) std::swap(a[j], b[j]);
      }
      next[p].bits = std::move(a);
      next[p + 1].bits = std::move(b);
    }
    for (auto& ind : next)
      for (auto& bit : ind.bits)
        if (rng.bernoulli(config.mutation)) bit ^= 1u;

    for (int e = 0; e < config.elitism && e < static_cast<int>(hall.size()); ++e)
      next[e].bits = hall[e].bits;

    pop = std::move(next);
    evaluate_all(pop);

    double mean = 0.0;
    int feasible = 0;
    for (const auto& ind : pop) {
      mean += ind.eval.profit_cents;
      feasible += ind.eval.feasible() ? 1 : 0;
      update_hall(ind);
      if (strictly_better(ind.eval, best.eval)) best = ind;
    }
    result.trace.push_back({gen, best.eval.profit_cents, mean / PN,
                            static_cast<double>(feasible) / PN});
  }

  result.best_prices = best.prices;
  result.best_eval = best.eval;
  result.evaluations = evaluations;
  return result;
}

}  // namespace tariff::ga
