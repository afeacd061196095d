#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tariff/baseline.hpp"
#include "tariff/cnone.hpp"
#include "tariff/csm.hpp"
#include "tariff/ga.hpp"
#include "tariff/hems.hpp"
#include "tariff/retailer.hpp"

namespace tariff::scenario {

// One scenario: customer mix, household template, market limits, learning
// and GA settings. Loaded from a key = value file; see docs in README.
struct ScenarioConfig {
  std::uint64_t seed = 42;
  int days = 1;  // consecutive simulated days (models update in between)

  int n_hems = 50;
  int n_sm = 30;
  int n_none = 20;

  double price_min_cents = 6.0;
  double price_max_cents = 14.0;
  double revenue_cap_per_customer_cents = -1.0;  // <0: 350, or 270 with PV
  double capacity_factor = 1.5;   // E_max = factor x reference peak
  double capacity_kwh = -1.0;     // explicit E_max override when >= 0

  double cost_a = 0.005;
  double cost_b = 5.0;
  double cost_c = 0.0;

  ga::GaConfig ga;

  int csm_history_days = 90;
  double waiting_cost_max = 0.5;  // cents per slot of start delay

  double lambda = 1.0;
  int cnone_history_days = 60;
  std::string cnone_history_csv;  // optional; synthetic pool history if empty

  bool storage_enabled = false;
  hems::StorageSpec storage;

  bool pv_enabled = false;
  double pv_peak_kwh = 1.5;

  double background_kwh = 0.05;

  bool jitter_enabled = false;
  double jitter_fraction = 0.2;

  baseline::BaselineConfig baseline;

  std::vector<hems::ApplianceSpec> appliances;  // empty = default template

  int total_customers() const { return n_hems + n_sm + n_none; }
  double revenue_cap_cents() const;
  void validate() const;
};

ScenarioConfig load_config(const std::string& path);
std::vector<hems::ApplianceSpec> default_appliances();

// Customer-mix presets (percent of the pool) behind `--case`.
void apply_case(ScenarioConfig& config, int case_id);

// Bundled daylight-shaped PV forecast: zero outside 8AM-6PM.
std::vector<double> pv_forecast(double peak_kwh);

// ---- synthetic histories ----

struct ApplianceHistory {
  hems::ApplianceSpec spec;
  std::vector<csm::DayRecord> days;
};

// Per-appliance smart-meter history for one household: random daily prices,
// shiftable usage from a waiting-cost-perturbed scheduling objective,
// curtailable usage from the greedy optimum plus clipped noise.
std::vector<ApplianceHistory> generate_csm_history(
    const std::vector<hems::ApplianceSpec>& appliances, int days, double waiting_cost_max,
    double price_min, double price_max, Rng rng);

// Ground-truth aggregate demand for a pool without meters, feasible under
// the elasticity sign and column-sum constraints and calibrated to
// 36 kWh/day per household at mid prices.
cnone::AggregateDemandModel synthetic_cnone_truth(int pool_size);

cnone::DemandHistory generate_cnone_history(int pool_size, int days, double lambda,
                                            double price_min, double price_max,
                                            double noise_fraction, Rng rng);

// ---- CSV interfaces ----

void write_history_csv(const std::string& path, const std::vector<csm::DayRecord>& days);
std::vector<csm::DayRecord> read_history_csv(const std::string& path);

// Columns date,slot,price_cents,demand_kwh with 24 slots per date; demand is
// rescaled so the mean daily energy equals pool_size x 36 kWh.
cnone::DemandHistory ingest_price_demand_csv(const std::string& path, int pool_size,
                                             double lambda = 1.0);

void write_price_demand_csv(const std::string& path, const cnone::DemandHistory& history);

// Aggregate-model JSON: {"alpha": [...], "beta": [[...], ...]}. Reading
// validates the elasticity invariants.
void write_aggregate_model_json(const cnone::AggregateDemandModel& model,
                                const std::string& path);
cnone::AggregateDemandModel read_aggregate_model_json(const std::string& path);

// ---- customer pool ----

struct CsmShiftable {
  hems::ApplianceSpec spec;
  csm::ScheduleSet schedules;
  csm::RankProbabilityModel model;
};

struct CsmCurtailable {
  hems::ApplianceSpec spec;
  csm::CurtailableDemandModel model;
  std::vector<csm::DayRecord> history;
};

struct CsmCustomer {
  std::vector<CsmShiftable> shiftable;
  std::vector<CsmCurtailable> curtailable;
};

struct Pool {
  ScenarioConfig config;
  std::vector<hems::HouseholdSpec> hems_households;  // one template when homogeneous
  bool hems_homogeneous = true;
  std::vector<CsmCustomer> sm_customers;
  std::optional<cnone::AggregateDemandModel> none_model;
  std::optional<cnone::AggregateDemandModel> none_truth;  // behavioral source when synthetic
  cnone::DemandHistory none_history;
  retailer::CostModel cost;
  retailer::MarketLimits limits;
  std::vector<double> pv_household;  // per-household PV forecast (empty if disabled)
  int day_index = 0;
};

Pool build_pool(const ScenarioConfig& config);

// Group order: HEMS, smart-meter, unmetered (empty groups included).
std::vector<retailer::GroupResponse> pool_responses(const Pool& pool, const PriceVector& prices);
retailer::MarketEvaluation pool_evaluate(const Pool& pool, const PriceVector& prices);
ga::FitnessFn make_fitness(const Pool& pool);

// Simulates the customers' actual behavior under announced prices and applies
// exactly one model update per learned appliance plus one pool-history day.
void advance_day(Pool& pool, const PriceVector& prices);

// ---- orchestration ----

struct BaselineSummary {
  PriceVector prices;
  double revenue_cents = 0.0;
  double profit_cents = 0.0;
  double violation = 0.0;
  int rounds = 0;
};

struct CaseResult {
  int case_id = 0;  // 0 = custom mix
  int n_hems = 0, n_sm = 0, n_none = 0;
  PriceVector prices;
  retailer::MarketEvaluation eval;
  std::vector<retailer::GroupResponse> group_responses;
  std::vector<ga::GaTracePoint> trace;
  double wall_seconds = 0.0;
  std::optional<BaselineSummary> baseline;
};

// GA pricing for the pool's current models.
CaseResult optimize_day(const Pool& pool);

// build_pool + (GA, then advance a day) x config.days; optional baseline
// comparison on the final day's models.
CaseResult run_case(const ScenarioConfig& config, int case_id = 0, bool with_baseline = false);

// result.json, trace.csv, prices.csv, demand.csv under out_dir.
void write_outputs(const CaseResult& result, const std::string& out_dir);

}  // namespace tariff::scenario
