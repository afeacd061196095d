#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tariff/hems.hpp"

namespace tariff::csm {

// All candidate schedules of one shiftable appliance: slot subsets for
// interruptible operation, contiguous blocks otherwise. Deterministic
// lexicographic order; each schedule delivers E at E/L per slot.
struct ScheduleSet {
  std::string appliance;
  enum class Enumeration { Combinations, ContiguousStarts } enumeration =
      Enumeration::Combinations;
  std::vector<std::vector<int>> schedules;  // sorted slot indices
  double energy_per_slot = 0.0;             // E / L
  int slots_per_schedule = 0;               // L

  int count() const { return static_cast<int>(schedules.size()); }
};

// Largest supported k; the expected-demand sums run over every schedule.
inline constexpr int kMaxSchedules = 4096;

ScheduleSet enumerate_schedules(const hems::ApplianceSpec& spec, int horizon = kSlots);

struct RankedCost {
  int schedule_index = 0;          // index into ScheduleSet::schedules
  std::int64_t cost_hundredths = 0;  // price sum over the schedule's slots
};

// Ascending schedule costs; equal costs keep enumeration order.
std::vector<RankedCost> rank_costs(const PriceVector& prices, const ScheduleSet& schedules);

// Probabilities that the appliance runs at the i-th cheapest schedule,
// updated one observed day at a time. Internally the distribution is kept
// as pseudo-counts S_i with P_i = S_i / d, which makes the recursion agree
// with the batch frequency f_i(d)/d bit-for-bit on tie-free histories.
class RankProbabilityModel {
 public:
  explicit RankProbabilityModel(int ranks);

  int ranks() const { return static_cast<int>(counts_.size()); }
  int observations() const { return days_; }
  double probability(int rank) const;  // zero-based rank
  std::vector<double> probabilities() const;

 private:
  friend RankProbabilityModel update_rank_probabilities(const RankProbabilityModel&,
                                                        const std::vector<RankedCost>&,
                                                        int observed_schedule_index);
  std::vector<double> counts_;
  int days_ = 0;
};

// One recursive update from a day's ranked costs and the schedule the
// customer actually ran. Ties split the unit increment proportionally to the
// current probabilities of the tied ranks (uniformly if those are all zero).
RankProbabilityModel update_rank_probabilities(const RankProbabilityModel& model,
                                               const std::vector<RankedCost>& ranked,
                                               int observed_schedule_index);

struct ShiftableExpectation {
  std::vector<double> kwh;  // per-slot expected consumption
  double bill_cents = 0.0;  // expected daily bill
};

ShiftableExpectation expected_shiftable_demand(const PriceVector& prices,
                                               const RankProbabilityModel& model,
                                               const ScheduleSet& schedules);

// One day of per-appliance history: the announced prices and the metered
// per-slot consumption (full horizon, zero outside the window).
struct DayRecord {
  PriceVector prices;
  std::vector<double> kwh;
};

// Replays a history through the recursive update in day order.
RankProbabilityModel fit_rank_model(const ScheduleSet& schedules,
                                    const std::vector<DayRecord>& history);

// Index of the schedule whose slot set matches `slots`, or -1.
int find_schedule_index(const ScheduleSet& schedules, const std::vector<int>& slots);

// Slots with positive consumption; recovers the schedule a metered day used.
std::vector<int> used_slots(const std::vector<double>& kwh);

// Per-slot linear demand in the window prices: kwh_j = intercept_j +
// sum_l coef_j_l * p[window_first + l].
struct CurtailableDemandModel {
  int window_first = 0;
  int window_last = 0;
  std::vector<double> intercept;
  std::vector<std::vector<double>> coef;

  int window_length() const { return window_last - window_first + 1; }
};

struct CurtailableFitOptions {
  double ridge = 1e-8;          // fallback regularization
  double cond_threshold = 1e10; // apply ridge above this condition estimate
  bool allow_ridge = true;
};

CurtailableDemandModel fit_curtailable_demand(const std::vector<DayRecord>& history,
                                              int window_first, int window_last,
                                              const CurtailableFitOptions& opts = {});

struct CurtailablePrediction {
  std::vector<double> kwh;  // full horizon, clamped at >= 0
  double bill_cents = 0.0;
};

CurtailablePrediction predict_curtailable(const CurtailableDemandModel& model,
                                          const PriceVector& prices);

}  // namespace tariff::csm
