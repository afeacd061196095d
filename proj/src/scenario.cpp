#include "tariff/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace tariff::scenario {

namespace {

using json = nlohmann::json;

double round_cents(double v) { return std::round(v * 100.0) / 100.0; }

PriceVector random_prices(Rng& rng, double lo, double hi) {
  PriceVector p(kSlots);
  for (auto& v : p) v = round_cents(rng.uniform(lo, hi));
  return p;
}

bool is_shiftable(const hems::ApplianceSpec& spec) {
  return spec.kind != hems::ApplianceKind::Curtailable;
}

// Scheduling objective of a customer who dislikes late starts: the day's
// waiting weight w adds w cents per slot of delay past the window opening.
PriceVector waiting_adjusted(const PriceVector& prices, const hems::ApplianceSpec& spec,
                             double w) {
  PriceVector p = prices;
  for (int h = spec.window_first; h <= spec.window_last; ++h)
    p[h] += w * (h - spec.window_first);
  return p;
}

std::vector<double> simulate_curtailable_day(const PriceVector& prices,
                                             const hems::ApplianceSpec& spec, Rng& rng) {
  auto kwh = hems::schedule_curtailable(prices, spec).kwh;
  for (int h = spec.window_first; h <= spec.window_last; ++h) {
    double noisy = kwh[h] * (1.0 + rng.uniform(-0.15, 0.15));
    kwh[h] = std::clamp(noisy, spec.level_min_kwh, spec.level_max_kwh);
  }
  return kwh;
}

std::vector<double> simulate_shiftable_day(const PriceVector& prices,
                                           const hems::ApplianceSpec& spec, double waiting_max,
                                           Rng& rng) {
  double w = rng.uniform(0.0, waiting_max);
  return hems::schedule_appliance(waiting_adjusted(prices, spec, w), spec).kwh;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& text, const std::string& path, int row) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ": row " + std::to_string(row) + ": non-numeric field '" + text + "'");
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

std::vector<double> pv_forecast(double peak_kwh) {
  // Daylight between 8AM (slot 0) and 6PM (slot 10), half-sine profile.
  std::vector<double> pv(kSlots, 0.0);
  for (int h = 0; h < 10; ++h) pv[h] = peak_kwh * std::sin(M_PI * (h + 0.5) / 10.0);
  return pv;
}

std::vector<ApplianceHistory> generate_csm_history(
    const std::vector<hems::ApplianceSpec>& appliances, int days, double waiting_cost_max,
    double price_min, double price_max, Rng rng) {
  require(days >= 30, "history generation needs at least 30 days");
  std::vector<ApplianceHistory> out;
  out.reserve(appliances.size());
  for (const auto& spec : appliances) out.push_back({spec, {}});

  for (int d = 0; d < days; ++d) {
    PriceVector prices = random_prices(rng, price_min, price_max);
    for (auto& hist : out) {
      std::vector<double> kwh = is_shiftable(hist.spec)
                                    ? simulate_shiftable_day(prices, hist.spec, waiting_cost_max, rng)
                                    : simulate_curtailable_day(prices, hist.spec, rng);
      hist.days.push_back({prices, std::move(kwh)});
    }
  }
  return out;
}

cnone::AggregateDemandModel synthetic_cnone_truth(int pool_size) {
  require(pool_size >= 1, "pool size must be positive");
  // Relative household load over the 8AM-start day, evening peak around
  // 5PM-10PM, normalized to 36 kWh/day.
  static const double shape[kSlots] = {1.2, 1.1, 1.0, 1.0, 1.1, 1.2, 1.3, 1.5,
                                       1.8, 2.2, 2.6, 2.8, 2.6, 2.2, 1.8, 1.5,
                                       1.2, 1.0, 0.9, 0.8, 0.8, 0.9, 1.0, 1.1};
  double total = 0.0;
  for (double s : shape) total += s;

  cnone::AggregateDemandModel truth;
  truth.alpha.resize(kSlots);
  truth.beta = Eigen::MatrixXd::Zero(kSlots, kSlots);

  Eigen::VectorXd mu(kSlots);
  for (int h = 0; h < kSlots; ++h) mu(h) = 36.0 * shape[h] / total * pool_size;

  for (int h = 0; h < kSlots; ++h) {
    double e = 0.05 * mu(h);  // kWh per cent, column scale
    truth.beta(h, h) = -e;
    if (h - 1 >= 0) truth.beta(h - 1, h) = 0.30 * e;
    if (h + 1 < kSlots) truth.beta(h + 1, h) = 0.30 * e;
    if (h - 2 >= 0) truth.beta(h - 2, h) = 0.10 * e;
    if (h + 2 < kSlots) truth.beta(h + 2, h) = 0.10 * e;
  }
  // Calibrate intercepts so demand at uniform 10-cent prices equals mu.
  for (int h = 0; h < kSlots; ++h) truth.alpha(h) = mu(h) - 10.0 * truth.beta.row(h).sum();
  truth.validate();
  return truth;
}

cnone::DemandHistory generate_cnone_history(int pool_size, int days, double lambda,
                                            double price_min, double price_max,
                                            double noise_fraction, Rng rng) {
  auto truth = synthetic_cnone_truth(pool_size);
  cnone::DemandHistory history;
  history.lambda = lambda;
  for (int d = 0; d < days; ++d) {
    PriceVector p = random_prices(rng, price_min, price_max);
    Eigen::VectorXd y = cnone::evaluate_linear(truth, p);
    std::vector<double> demand(kSlots);
    for (int h = 0; h < kSlots; ++h) {
      double noisy = y(h) * (1.0 + rng.uniform(-noise_fraction, noise_fraction));
      demand[h] = std::max(0.0, noisy);
    }
    history.prices.push_back(std::move(p));
    history.demand_kwh.push_back(std::move(demand));
  }
  return history;
}

void write_history_csv(const std::string& path, const std::vector<csm::DayRecord>& days) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "day,slot,price_cents,kwh\n";
  char line[96];
  for (std::size_t d = 0; d < days.size(); ++d) {
    for (int h = 0; h < kSlots; ++h) {
      std::snprintf(line, sizeof(line), "%zu,%d,%.2f,%.6f\n", d + 1, h, days[d].prices[h],
                    days[d].kwh[h]);
      out << line;
    }
  }
}

std::vector<csm::DayRecord> read_history_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  int row = 0;
  std::getline(in, line);
  ++row;
  if (split_csv_row(line) != std::vector<std::string>{"day", "slot", "price_cents", "kwh"})
    throw ParseError(path + ": row 1: expected header day,slot,price_cents,kwh");

  std::vector<csm::DayRecord> days;
  std::map<long, std::size_t> day_index;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_csv_row(line);
    if (fields.size() != 4)
      throw ParseError(path + ": row " + std::to_string(row) + ": expected 4 fields");
    long day = std::lround(parse_number(fields[0], path, row));
    int slot = static_cast<int>(std::lround(parse_number(fields[1], path, row)));
    if (slot < 0 || slot >= kSlots)
      throw ParseError(path + ": row " + std::to_string(row) + ": slot out of range");
    auto [it, fresh] = day_index.try_emplace(day, days.size());
    if (fresh) days.push_back({PriceVector(kSlots, 0.0), std::vector<double>(kSlots, 0.0)});
    auto& rec = days[it->second];
    rec.prices[slot] = parse_number(fields[2], path, row);
    rec.kwh[slot] = parse_number(fields[3], path, row);
  }
  return days;
}

cnone::DemandHistory ingest_price_demand_csv(const std::string& path, int pool_size,
                                             double lambda) {
  require(pool_size >= 1, "pool size must be positive");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  int row = 0;
  std::getline(in, line);
  ++row;
  if (split_csv_row(line) != std::vector<std::string>{"date", "slot", "price_cents", "demand_kwh"})
    throw ParseError(path + ": row 1: expected header date,slot,price_cents,demand_kwh");

  cnone::DemandHistory history;
  history.lambda = lambda;
  std::map<std::string, std::size_t> date_index;
  std::vector<int> slots_seen;
  std::vector<int> last_row_of_day;

  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_csv_row(line);
    if (fields.size() != 4)
      throw ParseError(path + ": row " + std::to_string(row) + ": expected 4 fields");
    const std::string& date = fields[0];
    int slot = static_cast<int>(std::lround(parse_number(fields[1], path, row)));
    if (slot < 0 || slot >= kSlots)
      throw ParseError(path + ": row " + std::to_string(row) + ": slot out of range");
    auto [it, fresh] = date_index.try_emplace(date, history.prices.size());
    if (fresh) {
      history.prices.emplace_back(kSlots, 0.0);
      history.demand_kwh.emplace_back(kSlots, 0.0);
      slots_seen.push_back(0);
      last_row_of_day.push_back(row);
    }
    std::size_t d = it->second;
    history.prices[d][slot] = parse_number(fields[2], path, row);
    history.demand_kwh[d][slot] = parse_number(fields[3], path, row);
    slots_seen[d] += 1;
    last_row_of_day[d] = row;
  }
  for (std::size_t d = 0; d < slots_seen.size(); ++d) {
    if (slots_seen[d] != kSlots)
      throw ParseError(path + ": row " + std::to_string(last_row_of_day[d]) +
                       ": incomplete day (" + std::to_string(slots_seen[d]) + " of 24 slots)");
  }
  require(!history.prices.empty(), path + ": no data rows");

  // Down-scale so the pool's mean daily energy is pool_size x 36 kWh.
  double mean_daily = 0.0;
  for (const auto& day : history.demand_kwh)
    for (double v : day) mean_daily += v;
  mean_daily /= static_cast<double>(history.demand_kwh.size());
  require(mean_daily > 0.0, path + ": zero total demand");
  double factor = pool_size * 36.0 / mean_daily;
  for (auto& day : history.demand_kwh)
    for (double& v : day) v *= factor;
  return history;
}

void write_price_demand_csv(const std::string& path, const cnone::DemandHistory& history) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "date,slot,price_cents,demand_kwh\n";
  char line[96];
  for (int d = 0; d < history.days(); ++d) {
    for (int h = 0; h < kSlots; ++h) {
      std::snprintf(line, sizeof(line), "%d,%d,%.2f,%.6f\n", d + 1, h, history.prices[d][h],
                    history.demand_kwh[d][h]);
      out << line;
    }
  }
}

void write_aggregate_model_json(const cnone::AggregateDemandModel& model,
                                const std::string& path) {
  model.validate();
  json doc;
  doc["alpha"] = std::vector<double>(model.alpha.data(), model.alpha.data() + kSlots);
  std::vector<std::vector<double>> beta(kSlots, std::vector<double>(kSlots));
  for (int h = 0; h < kSlots; ++h)
    for (int l = 0; l < kSlots; ++l) beta[h][l] = model.beta(h, l);
  doc["beta"] = beta;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

cnone::AggregateDemandModel read_aggregate_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  cnone::AggregateDemandModel model;
  auto alpha = doc.at("alpha").get<std::vector<double>>();
  auto beta = doc.at("beta").get<std::vector<std::vector<double>>>();
  require(static_cast<int>(alpha.size()) == kSlots && static_cast<int>(beta.size()) == kSlots,
          path + ": model dimensions must be 24");
  model.alpha.resize(kSlots);
  model.beta.resize(kSlots, kSlots);
  for (int h = 0; h < kSlots; ++h) {
    require(static_cast<int>(beta[h].size()) == kSlots, path + ": beta row length must be 24");
    model.alpha(h) = alpha[h];
    for (int l = 0; l < kSlots; ++l) model.beta(h, l) = beta[h][l];
  }
  model.validate();
  return model;
}

namespace {

hems::ApplianceSpec jittered(const hems::ApplianceSpec& spec, double fraction, Rng& rng) {
  hems::ApplianceSpec s = spec;
  double f = 1.0 + rng.uniform(-fraction, fraction);
  switch (s.kind) {
    case hems::ApplianceKind::Interruptible:
      s.total_kwh = std::min(spec.total_kwh * f, s.rated_kwh * s.window_length());
      break;
    case hems::ApplianceKind::NonInterruptible:
      s.rated_kwh = spec.rated_kwh * f;
      s.total_kwh = s.rated_kwh * s.run_slots;
      break;
    case hems::ApplianceKind::Curtailable:
      s.total_min_kwh = std::clamp(spec.total_min_kwh * f, s.level_min_kwh * s.window_length(),
                                   s.level_max_kwh * s.window_length());
      break;
  }
  return s;
}

}  // namespace

Pool build_pool(const ScenarioConfig& config) {
  config.validate();
  Pool pool;
  pool.config = config;
  Rng root(config.seed);

  pool.cost = retailer::CostModel::uniform(config.cost_a, config.cost_b, config.cost_c);
  pool.limits.price_min_cents = config.price_min_cents;
  pool.limits.price_max_cents = config.price_max_cents;
  pool.limits.revenue_cap_cents = config.revenue_cap_cents();
  pool.limits.capacity_kwh = 1e12;  // placeholder until the reference peak is known

  const auto appliances = config.appliances.empty() ? default_appliances() : config.appliances;
  if (config.pv_enabled) pool.pv_household = pv_forecast(config.pv_peak_kwh);

  hems::HouseholdSpec tmpl;
  tmpl.appliances = appliances;
  tmpl.background_kwh.assign(kSlots, config.background_kwh);
  if (config.storage_enabled) tmpl.storage = config.storage;
  tmpl.pv_kwh = pool.pv_household;

  if (config.n_hems > 0) {
    if (!config.jitter_enabled) {
      pool.hems_homogeneous = true;
      pool.hems_households.push_back(tmpl);
    } else {
      pool.hems_homogeneous = false;
      for (int i = 0; i < config.n_hems; ++i) {
        Rng jrng = root.child(100 + i);
        hems::HouseholdSpec hh = tmpl;
        for (auto& spec : hh.appliances) spec = jittered(spec, config.jitter_fraction, jrng);
        pool.hems_households.push_back(std::move(hh));
      }
    }
  }

  for (int i = 0; i < config.n_sm; ++i) {
    auto histories = generate_csm_history(appliances, config.csm_history_days,
                                          config.waiting_cost_max, config.price_min_cents,
                                          config.price_max_cents, root.child(1000 + i));
    CsmCustomer customer;
    for (auto& hist : histories) {
      if (is_shiftable(hist.spec)) {
        auto schedules = csm::enumerate_schedules(hist.spec);
        auto model = csm::fit_rank_model(schedules, hist.days);
        customer.shiftable.push_back({hist.spec, std::move(schedules), std::move(model)});
      } else {
        auto model = csm::fit_curtailable_demand(hist.days, hist.spec.window_first,
                                                 hist.spec.window_last);
        customer.curtailable.push_back({hist.spec, std::move(model), std::move(hist.days)});
      }
    }
    pool.sm_customers.push_back(std::move(customer));
  }

  if (config.n_none > 0) {
    if (!config.cnone_history_csv.empty()) {
      pool.none_history =
          ingest_price_demand_csv(config.cnone_history_csv, config.n_none, config.lambda);
    } else {
      pool.none_truth = synthetic_cnone_truth(config.n_none);
      pool.none_history =
          generate_cnone_history(config.n_none, config.cnone_history_days, config.lambda,
                                 config.price_min_cents, config.price_max_cents, 0.01,
                                 root.child(2000));
    }
    pool.none_model = cnone::fit_aggregate_demand(pool.none_history).model;
  }

  if (config.capacity_kwh > 0.0) {
    pool.limits.capacity_kwh = config.capacity_kwh;
  } else {
    // Reference peak at uniform mid prices; ties make the schedulers stack
    // loads at window openings, so this is a conservative peak estimate.
    PriceVector mid(kSlots, round_cents(0.5 * (config.price_min_cents + config.price_max_cents)));
    auto responses = pool_responses(pool, mid);
    double peak = 0.0;
    for (int h = 0; h < kSlots; ++h) {
      double total = 0.0;
      for (const auto& g : responses) total += g.kwh[h];
      peak = std::max(peak, total);
    }
    pool.limits.capacity_kwh = std::max(1.0, config.capacity_factor * peak);
  }
  return pool;
}

std::vector<retailer::GroupResponse> pool_responses(const Pool& pool, const PriceVector& prices) {
  const auto& config = pool.config;
  std::vector<retailer::GroupResponse> groups(3);
  for (auto& g : groups) g.kwh.assign(kSlots, 0.0);

  if (config.n_hems > 0) {
    auto& g = groups[0];
    if (pool.hems_homogeneous) {
      auto r = hems::household_response(prices, pool.hems_households[0]);
      for (int h = 0; h < kSlots; ++h) g.kwh[h] = r.kwh[h] * config.n_hems;
      g.bill_cents = r.bill_cents * config.n_hems;
    } else {
      for (const auto& hh : pool.hems_households) {
        auto r = hems::household_response(prices, hh);
        for (int h = 0; h < kSlots; ++h) g.kwh[h] += r.kwh[h];
        g.bill_cents += r.bill_cents;
      }
    }
  }

  if (config.n_sm > 0) {
    auto& g = groups[1];
    for (const auto& customer : pool.sm_customers) {
      for (const auto& app : customer.shiftable) {
        auto e = csm::expected_shiftable_demand(prices, app.model, app.schedules);
        for (int h = 0; h < kSlots; ++h) g.kwh[h] += e.kwh[h];
        g.bill_cents += e.bill_cents;
      }
      for (const auto& app : customer.curtailable) {
        auto p = csm::predict_curtailable(app.model, prices);
        for (int h = 0; h < kSlots; ++h) g.kwh[h] += p.kwh[h];
        g.bill_cents += p.bill_cents;
      }
    }
    for (int h = 0; h < kSlots; ++h) {
      double fixed = config.background_kwh;
      if (!pool.pv_household.empty()) fixed -= pool.pv_household[h];
      g.kwh[h] += fixed * config.n_sm;
      g.bill_cents += prices[h] * fixed * config.n_sm;
    }
  }

  if (config.n_none > 0 && pool.none_model) {
    auto& g = groups[2];
    auto pred = cnone::predict_aggregate(*pool.none_model, prices);
    for (int h = 0; h < kSlots; ++h) {
      double net = pred[h];
      if (!pool.pv_household.empty()) net -= pool.pv_household[h] * config.n_none;
      g.kwh[h] = net;
      g.bill_cents += prices[h] * net;
    }
  }
  return groups;
}

retailer::MarketEvaluation pool_evaluate(const Pool& pool, const PriceVector& prices) {
  auto responses = pool_responses(pool, prices);
  return retailer::evaluate_prices(prices, responses, pool.cost, pool.limits);
}

ga::FitnessFn make_fitness(const Pool& pool) {
  const Pool* p = &pool;
  return [p](const PriceVector& prices) { return pool_evaluate(*p, prices); };
}

void advance_day(Pool& pool, const PriceVector& prices) {
  Rng day_rng = Rng(pool.config.seed).child(5000 + pool.day_index);

  for (std::size_t i = 0; i < pool.sm_customers.size(); ++i) {
    Rng rng = day_rng.child(i);
    auto& customer = pool.sm_customers[i];
    for (auto& app : customer.shiftable) {
      auto kwh = simulate_shiftable_day(prices, app.spec, pool.config.waiting_cost_max, rng);
      int observed = csm::find_schedule_index(app.schedules, csm::used_slots(kwh));
      require(observed >= 0, app.spec.name + ": simulated day used an unknown schedule");
      app.model = csm::update_rank_probabilities(app.model, csm::rank_costs(prices, app.schedules),
                                                 observed);
    }
    for (auto& app : customer.curtailable) {
      app.history.push_back({prices, simulate_curtailable_day(prices, app.spec, rng)});
      app.model = csm::fit_curtailable_demand(app.history, app.spec.window_first,
                                              app.spec.window_last);
    }
  }

  if (pool.none_model) {
    Rng rng = day_rng.child(999);
    const auto& source = pool.none_truth ? *pool.none_truth : *pool.none_model;
    Eigen::VectorXd y = cnone::evaluate_linear(source, prices);
    std::vector<double> demand(kSlots);
    for (int h = 0; h < kSlots; ++h)
      demand[h] = std::max(0.0, y(h) * (1.0 + rng.uniform(-0.01, 0.01)));
    pool.none_history.prices.push_back(prices);
    pool.none_history.demand_kwh.push_back(std::move(demand));
    pool.none_model = cnone::fit_aggregate_demand(pool.none_history).model;
  }

  pool.day_index += 1;
}

CaseResult optimize_day(const Pool& pool) {
  CaseResult result;
  result.n_hems = pool.config.n_hems;
  result.n_sm = pool.config.n_sm;
  result.n_none = pool.config.n_none;

  ga::GaConfig cfg = pool.config.ga;
  cfg.seed = Rng(pool.config.seed).child(9000 + pool.day_index).next_u64();
  auto fitness = make_fitness(pool);

  Timer timer;
  auto ga_result = ga::evolve(cfg, pool.limits, fitness);
  result.wall_seconds = timer.seconds();

  result.prices = ga_result.best_prices;
  result.eval = ga_result.best_eval;
  result.trace = std::move(ga_result.trace);
  result.group_responses = pool_responses(pool, result.prices);
  return result;
}

CaseResult run_case(const ScenarioConfig& config, int case_id, bool with_baseline) {
  ScenarioConfig cfg = config;
  if (case_id > 0) apply_case(cfg, case_id);
  cfg.validate();

  Pool pool = build_pool(cfg);
  CaseResult result;
  for (int day = 0; day < cfg.days; ++day) {
    result = optimize_day(pool);
    if (day + 1 < cfg.days) advance_day(pool, result.prices);
  }
  result.case_id = case_id;

  if (with_baseline) {
    baseline::BaselineConfig bcfg = cfg.baseline;
    bcfg.seed = Rng(cfg.seed).child(7000).next_u64();
    auto fitness = make_fitness(pool);
    auto run = baseline::iterative_optimize_restarts(bcfg, fitness, pool.cost, pool.limits);
    BaselineSummary summary;
    summary.prices = run.prices;
    summary.revenue_cents = run.eval.revenue_cents;
    summary.profit_cents = run.eval.profit_cents;
    summary.violation = run.eval.violation;
    summary.rounds = run.rounds;
    result.baseline = summary;
  }
  return result;
}

void write_outputs(const CaseResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  json doc;
  doc["case"] = result.case_id;
  doc["customers"] = {{"hems", result.n_hems}, {"sm", result.n_sm}, {"none", result.n_none}};
  doc["revenue_cents"] = result.eval.revenue_cents;
  doc["cost_cents"] = result.eval.cost_cents;
  doc["profit_cents"] = result.eval.profit_cents;
  doc["violation"] = result.eval.violation;
  doc["wall_seconds"] = result.wall_seconds;
  doc["prices_cents"] = result.prices;
  doc["demand_kwh"] = {{"hems", result.group_responses[0].kwh},
                       {"sm", result.group_responses[1].kwh},
                       {"none", result.group_responses[2].kwh}};
  if (result.baseline) {
    doc["baseline"] = {{"revenue_cents", result.baseline->revenue_cents},
                       {"profit_cents", result.baseline->profit_cents},
                       {"violation", result.baseline->violation},
                       {"rounds", result.baseline->rounds},
                       {"prices_cents", result.baseline->prices}};
  }
  std::ofstream(fs::path(out_dir) / "result.json") << doc.dump(2) << "\n";

  {
    std::ofstream out(fs::path(out_dir) / "trace.csv");
    out << "generation,best_profit,mean_profit,feasible_fraction\n";
    char line[128];
    for (const auto& pt : result.trace) {
      std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.6f\n", pt.generation, pt.best_profit,
                    pt.mean_profit, pt.feasible_fraction);
      out << line;
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "prices.csv");
    out << "slot,price_cents\n";
    char line[64];
    for (int h = 0; h < kSlots; ++h) {
      std::snprintf(line, sizeof(line), "%d,%.2f\n", h, result.prices[h]);
      out << line;
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "demand.csv");
    out << "slot,hems_kwh,sm_kwh,none_kwh,total_kwh\n";
    char line[160];
    for (int h = 0; h < kSlots; ++h) {
      double a = result.group_responses[0].kwh[h];
      double b = result.group_responses[1].kwh[h];
      double c = result.group_responses[2].kwh[h];
      std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.6f,%.6f\n", h, a, b, c, a + b + c);
      out << line;
    }
  }
}

}  // namespace tariff::scenario
