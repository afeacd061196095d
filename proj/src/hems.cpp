#include "tariff/hems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tariff/numerics.hpp"

namespace tariff::hems {

namespace {

constexpr double kEnergyEps = 1e-9;

double dot_bill(const PriceVector& prices, const std::vector<double>& kwh) {
  double bill = 0.0;
  for (std::size_t h = 0; h < kwh.size(); ++h) bill += prices[h] * kwh[h];
  return bill;
}

// Window slots ordered by (price, slot): cheapest first, earliest slot wins
// ties. Integer price comparison keeps the order exact on the 0.01 grid.
std::vector<int> slots_by_price(const PriceVector& prices, const ApplianceSpec& spec) {
  std::vector<int> order;
  order.reserve(spec.window_length());
  for (int h = spec.window_first; h <= spec.window_last; ++h) order.push_back(h);
  auto cents = to_hundredths(prices);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return cents[a] < cents[b]; });
  return order;
}

void check_horizon(const PriceVector& prices, const ApplianceSpec& spec) {
  spec.validate(static_cast<int>(prices.size()));
}

}  // namespace

void ApplianceSpec::validate(int horizon) const {
  require(window_first >= 0 && window_last < horizon && window_first <= window_last,
          name + ": window outside horizon");
  switch (kind) {
    case ApplianceKind::Interruptible:
    case ApplianceKind::NonInterruptible:
      require(total_kwh > 0.0 || (kind == ApplianceKind::NonInterruptible && run_slots > 0),
              name + ": shiftable appliance needs positive energy");
      require(rated_kwh > 0.0, name + ": rated power must be positive");
      if (kind == ApplianceKind::NonInterruptible)
        require(run_slots >= 1 && run_slots <= window_length(),
                name + ": run length exceeds scheduling window");
      break;
    case ApplianceKind::Curtailable: {
      require(level_min_kwh >= 0.0 && level_max_kwh >= level_min_kwh,
              name + ": invalid per-slot consumption levels");
      double floor_total = level_min_kwh * window_length();
      double ceil_total = level_max_kwh * window_length();
      require(floor_total <= total_min_kwh + kEnergyEps && total_min_kwh <= ceil_total + kEnergyEps,
              name + ": minimum total energy outside the comfort band");
      break;
    }
  }
}

ApplianceSpec interruptible(std::string name, int start_hour, int end_hour, double total_kwh,
                            double rated_kwh) {
  ApplianceSpec s;
  s.name = std::move(name);
  s.kind = ApplianceKind::Interruptible;
  s.window_first = slot_of_hour(start_hour);
  int len = ((end_hour - start_hour) % 24 + 24) % 24;
  if (len == 0) len = 24;
  s.window_last = s.window_first + len - 1;
  require(s.window_last < kSlots, s.name + ": window wraps the 8AM day boundary");
  s.total_kwh = total_kwh;
  s.rated_kwh = rated_kwh;
  return s;
}

ApplianceSpec non_interruptible(std::string name, int start_hour, int end_hour, double rated_kwh,
                                int run_slots) {
  ApplianceSpec s = interruptible(std::move(name), start_hour, end_hour, rated_kwh * run_slots,
                                  rated_kwh);
  s.kind = ApplianceKind::NonInterruptible;
  s.run_slots = run_slots;
  return s;
}

ApplianceSpec curtailable(std::string name, int start_hour, int end_hour, double total_min_kwh,
                          double level_min_kwh, double level_max_kwh) {
  ApplianceSpec s;
  s.name = std::move(name);
  s.kind = ApplianceKind::Curtailable;
  s.window_first = slot_of_hour(start_hour);
  int len = ((end_hour - start_hour) % 24 + 24) % 24;
  if (len == 0) len = 24;
  s.window_last = s.window_first + len - 1;
  require(s.window_last < kSlots, s.name + ": window wraps the 8AM day boundary");
  s.total_min_kwh = total_min_kwh;
  s.level_min_kwh = level_min_kwh;
  s.level_max_kwh = level_max_kwh;
  return s;
}

void StorageSpec::validate() const {
  require(capacity_kwh > 0.0, "storage: capacity must be positive");
  require(rate_kwh > 0.0, "storage: charge/discharge rate must be positive");
  require(initial_kwh >= 0.0 && initial_kwh <= capacity_kwh, "storage: initial SoC out of range");
  require(final_kwh >= 0.0 && final_kwh <= capacity_kwh, "storage: final SoC out of range");
  require(efficiency == 1.0, "storage: only unit efficiency is modelled");
}

ConsumptionProfile schedule_interruptible(const PriceVector& prices, const ApplianceSpec& spec) {
  check_horizon(prices, spec);
  require(spec.kind == ApplianceKind::Interruptible, spec.name + ": wrong scheduler");

  int full = static_cast<int>(std::floor(spec.total_kwh / spec.rated_kwh + kEnergyEps));
  double remainder = spec.total_kwh - full * spec.rated_kwh;
  if (remainder < kEnergyEps) remainder = 0.0;
  int needed = full + (remainder > 0.0 ? 1 : 0);
  if (needed > spec.window_length())
    throw InfeasibleError(spec.name + ": window too short for required energy");

  ConsumptionProfile out;
  out.kwh.assign(prices.size(), 0.0);
  auto order = slots_by_price(prices, spec);
  for (int i = 0; i < full; ++i) out.kwh[order[i]] = spec.rated_kwh;
  if (remainder > 0.0) out.kwh[order[full]] = remainder;
  out.bill_cents = dot_bill(prices, out.kwh);
  return out;
}

ConsumptionProfile schedule_non_interruptible(const PriceVector& prices,
                                              const ApplianceSpec& spec) {
  check_horizon(prices, spec);
  require(spec.kind == ApplianceKind::NonInterruptible, spec.name + ": wrong scheduler");
  const int L = spec.run_slots;
  if (L > spec.window_length())
    throw InfeasibleError(spec.name + ": run length exceeds scheduling window");

  auto cents = to_hundredths(prices);
  std::int64_t window_sum = 0;
  for (int h = spec.window_first; h < spec.window_first + L; ++h) window_sum += cents[h];
  std::int64_t best_sum = window_sum;
  int best_start = spec.window_first;
  for (int start = spec.window_first + 1; start + L - 1 <= spec.window_last; ++start) {
    window_sum += cents[start + L - 1] - cents[start - 1];
    if (window_sum < best_sum) {  // strict: ties stay with the earliest start
      best_sum = window_sum;
      best_start = start;
    }
  }

  ConsumptionProfile out;
  out.kwh.assign(prices.size(), 0.0);
  for (int h = best_start; h < best_start + L; ++h) out.kwh[h] = spec.rated_kwh;
  out.bill_cents = dot_bill(prices, out.kwh);
  return out;
}

ConsumptionProfile schedule_curtailable(const PriceVector& prices, const ApplianceSpec& spec) {
  check_horizon(prices, spec);
  require(spec.kind == ApplianceKind::Curtailable, spec.name + ": wrong scheduler");
  const int T = spec.window_length();
  if (spec.level_max_kwh * T < spec.total_min_kwh - kEnergyEps)
    throw InfeasibleError(spec.name + ": comfort ceiling cannot reach the minimum total");

  ConsumptionProfile out;
  out.kwh.assign(prices.size(), 0.0);
  for (int h = spec.window_first; h <= spec.window_last; ++h) out.kwh[h] = spec.level_min_kwh;
  double deficit = spec.total_min_kwh - spec.level_min_kwh * T;
  if (deficit > kEnergyEps) {
    for (int h : slots_by_price(prices, spec)) {
      double add = std::min(deficit, spec.level_max_kwh - spec.level_min_kwh);
      out.kwh[h] += add;
      deficit -= add;
      if (deficit <= kEnergyEps) break;
    }
  }
  out.bill_cents = dot_bill(prices, out.kwh);
  return out;
}

ConsumptionProfile schedule_appliance(const PriceVector& prices, const ApplianceSpec& spec) {
  switch (spec.kind) {
    case ApplianceKind::Interruptible: return schedule_interruptible(prices, spec);
    case ApplianceKind::NonInterruptible: return schedule_non_interruptible(prices, spec);
    case ApplianceKind::Curtailable: return schedule_curtailable(prices, spec);
  }
  throw InputError(spec.name + ": unknown appliance kind");
}

StorageSchedule schedule_storage(const PriceVector& prices, const StorageSpec& spec,
                                 const std::vector<double>& load_kwh) {
  spec.validate();
  const int H = static_cast<int>(prices.size());
  require(static_cast<int>(load_kwh.size()) == H, "storage: load/price horizon mismatch");
  for (double v : load_kwh) require(v >= 0.0, "storage: appliance load must be nonnegative");

  using namespace numerics;
  // Variables: charge_0..charge_{H-1}, discharge_0..discharge_{H-1}.
  LinearProgram lp;
  lp.objective.resize(2 * H);
  lp.var_lower = Eigen::VectorXd::Zero(2 * H);
  lp.var_upper.resize(2 * H);
  for (int h = 0; h < H; ++h) {
    lp.objective(h) = prices[h];
    lp.objective(H + h) = -prices[h];
    lp.var_upper(h) = spec.rate_kwh;
    lp.var_upper(H + h) = spec.sell_back ? spec.rate_kwh : std::min(spec.rate_kwh, load_kwh[h]);
  }

  // SoC after each slot: initial + running net flow in [0, capacity]; the
  // final slot is pinned to the target SoC.
  lp.A = Eigen::MatrixXd::Zero(H, 2 * H);
  lp.row_lower.resize(H);
  lp.row_upper.resize(H);
  for (int h = 0; h < H; ++h) {
    for (int t = 0; t <= h; ++t) {
      lp.A(h, t) = 1.0;
      lp.A(h, H + t) = -1.0;
    }
    lp.row_lower(h) = -spec.initial_kwh;
    lp.row_upper(h) = spec.capacity_kwh - spec.initial_kwh;
  }
  lp.row_lower(H - 1) = lp.row_upper(H - 1) = spec.final_kwh - spec.initial_kwh;

  auto report = solve_lp(lp);
  if (report.status == SolveStatus::Infeasible)
    throw InfeasibleError("storage: final SoC unreachable under rate limits");
  if (report.status != SolveStatus::Optimal)
    throw SolverError("storage: LP did not converge");

  StorageSchedule out;
  out.charge_kwh.assign(H, 0.0);
  out.discharge_kwh.assign(H, 0.0);
  for (int h = 0; h < H; ++h) {
    out.charge_kwh[h] = std::max(0.0, report.solution(h));
    out.discharge_kwh[h] = std::max(0.0, report.solution(H + h));
  }
  out.objective_cents = report.objective;
  return out;
}

ConsumptionProfile household_response(const PriceVector& prices, const HouseholdSpec& household) {
  const int H = static_cast<int>(prices.size());
  ConsumptionProfile out;
  out.kwh.assign(H, 0.0);

  if (!household.background_kwh.empty()) {
    require(static_cast<int>(household.background_kwh.size()) == H,
            "household: background horizon mismatch");
    for (int h = 0; h < H; ++h) {
      require(household.background_kwh[h] >= 0.0, "household: negative background load");
      out.kwh[h] += household.background_kwh[h];
    }
  }
  for (const auto& spec : household.appliances) {
    auto profile = schedule_appliance(prices, spec);
    for (int h = 0; h < H; ++h) out.kwh[h] += profile.kwh[h];
  }

  // Storage sees the already-fixed appliance+background load; appliances
  // depend on prices only, so the decomposition is exact under sell-back.
  if (household.storage) {
    auto flows = schedule_storage(prices, *household.storage, out.kwh);
    for (int h = 0; h < H; ++h) out.kwh[h] += flows.charge_kwh[h] - flows.discharge_kwh[h];
  }
  if (!household.pv_kwh.empty()) {
    require(static_cast<int>(household.pv_kwh.size()) == H, "household: PV horizon mismatch");
    for (int h = 0; h < H; ++h) {
      require(household.pv_kwh[h] >= 0.0, "household: negative PV forecast");
      out.kwh[h] -= household.pv_kwh[h];
    }
  }

  out.bill_cents = dot_bill(prices, out.kwh);
  return out;
}

}  // namespace tariff::hems
