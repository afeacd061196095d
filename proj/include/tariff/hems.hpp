#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tariff/common.hpp"

namespace tariff::hems {

enum class ApplianceKind { Interruptible, NonInterruptible, Curtailable };

// One appliance over the (typically 24-slot) horizon. Windows are inclusive
// slot index ranges of the 8AM-start day; wall-clock windows that wrap
// midnight stay contiguous after slot_of_hour conversion.
struct ApplianceSpec {
  std::string name;
  ApplianceKind kind = ApplianceKind::Interruptible;
  int window_first = 0;
  int window_last = kSlots - 1;

  // shiftable kinds
  double rated_kwh = 0.0;  // energy per running slot
  double total_kwh = 0.0;  // E, total energy to deliver
  int run_slots = 0;       // L, non-interruptible block length

  // curtailable kind
  double level_min_kwh = 0.0;  // per-slot floor
  double level_max_kwh = 0.0;  // per-slot ceiling
  double total_min_kwh = 0.0;  // minimum acceptable total

  int window_length() const { return window_last - window_first + 1; }
  void validate(int horizon = kSlots) const;
};

ApplianceSpec interruptible(std::string name, int start_hour, int end_hour, double total_kwh,
                            double rated_kwh);
ApplianceSpec non_interruptible(std::string name, int start_hour, int end_hour, double rated_kwh,
                                int run_slots);
ApplianceSpec curtailable(std::string name, int start_hour, int end_hour, double total_min_kwh,
                          double level_min_kwh, double level_max_kwh);

struct StorageSpec {
  double capacity_kwh = 10.0;
  double rate_kwh = 2.0;  // per-slot charge/discharge cap
  double initial_kwh = 8.0;
  double final_kwh = 8.0;
  double efficiency = 1.0;  // perfect charging/discharging
  bool sell_back = true;
  void validate() const;
};

struct HouseholdSpec {
  std::vector<ApplianceSpec> appliances;
  std::vector<double> background_kwh;      // per slot; empty = none
  std::optional<StorageSpec> storage;
  std::vector<double> pv_kwh;              // per-slot forecast; empty = none
};

// Per-slot net grid consumption plus the bill it implies. Negative slots can
// occur only with PV surplus or sell-back storage.
struct ConsumptionProfile {
  std::vector<double> kwh;
  double bill_cents = 0.0;
};

struct StorageSchedule {
  std::vector<double> charge_kwh;
  std::vector<double> discharge_kwh;
  double objective_cents = 0.0;  // price-weighted net storage flow
};

// Cheapest-slots schedule, one partial slot carrying any E % rated remainder.
ConsumptionProfile schedule_interruptible(const PriceVector& prices, const ApplianceSpec& spec);

// Cheapest contiguous L-slot block; ties resolve to the earliest start.
ConsumptionProfile schedule_non_interruptible(const PriceVector& prices, const ApplianceSpec& spec);

// Floor everywhere, then the remaining U_min deficit filled greedily at the
// cheapest slots; the exact LP optimum for positive prices.
ConsumptionProfile schedule_curtailable(const PriceVector& prices, const ApplianceSpec& spec);

ConsumptionProfile schedule_appliance(const PriceVector& prices, const ApplianceSpec& spec);

// Price-arbitrage LP over SoC dynamics. Without sell-back, the per-slot
// discharge is capped by the household load so net grid draw stays >= 0.
StorageSchedule schedule_storage(const PriceVector& prices, const StorageSpec& spec,
                                 const std::vector<double>& load_kwh);

// Appliances + background + storage flows - PV; bill at retail prices with
// negative net slots selling at the same price.
ConsumptionProfile household_response(const PriceVector& prices, const HouseholdSpec& household);

}  // namespace tariff::hems
