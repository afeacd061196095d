#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "tariff/scenario.hpp"

namespace tariff::scenario {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct KeyValues {
  std::map<std::string, std::string> values;
  std::string path;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      std::size_t used = 0;
      double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ParseError(path + ": key '" + key + "' has non-numeric value '" + it->second + "'");
    }
  }

  long get_int(const std::string& key, long fallback) const {
    double v = get_double(key, static_cast<double>(fallback));
    long i = static_cast<long>(v);
    if (static_cast<double>(i) != v)
      throw ParseError(path + ": key '" + key + "' must be an integer");
    return i;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ParseError(path + ": key '" + key + "' must be a boolean");
  }
};

const char* kKnownKeys[] = {
    "seed", "days", "customers.total", "customers.hems", "customers.sm", "customers.none",
    "prices.min_cents", "prices.max_cents", "limits.revenue_cap_cents_per_customer",
    "limits.capacity_factor", "limits.capacity_kwh", "cost.a", "cost.b", "cost.c",
    "ga.bits_per_price", "ga.population", "ga.generations", "ga.mutation", "ga.crossover",
    "ga.tournament", "ga.elitism", "ga.jobs", "csm.history_days", "csm.waiting_cost_max",
    "cnone.lambda", "cnone.history_days", "cnone.history_csv", "storage.enabled",
    "storage.capacity_kwh", "storage.rate_kwh", "storage.initial_kwh", "storage.final_kwh",
    "storage.sell_back", "pv.enabled", "pv.peak_kwh", "background_kwh", "jitter.enabled",
    "jitter.fraction", "baseline.restarts", "baseline.tol_cents", "baseline.max_rounds",
};

bool known_key(const std::string& key) {
  for (const char* k : kKnownKeys)
    if (key == k) return true;
  return key.rfind("appliance.", 0) == 0;
}

hems::ApplianceSpec parse_appliance(const std::string& key, const std::string& value,
                                    const std::string& path) {
  std::istringstream in(value);
  std::string kind, name;
  int start = 0, end = 0;
  if (!(in >> kind >> name >> start >> end))
    throw ParseError(path + ": '" + key + "' needs: kind name start_hour end_hour params...");
  auto bad = [&](const std::string& what) {
    return ParseError(path + ": '" + key + "' (" + kind + "): " + what);
  };
  if (kind == "interruptible") {
    double energy = 0, rated = 0;
    if (!(in >> energy >> rated)) throw bad("expected total_kwh rated_kwh");
    return hems::interruptible(name, start, end, energy, rated);
  }
  if (kind == "non_interruptible") {
    double rated = 0;
    int run = 0;
    if (!(in >> rated >> run)) throw bad("expected rated_kwh run_slots");
    return hems::non_interruptible(name, start, end, rated, run);
  }
  if (kind == "curtailable") {
    double total = 0, lo = 0, hi = 0;
    if (!(in >> total >> lo >> hi)) throw bad("expected total_min_kwh level_min level_max");
    return hems::curtailable(name, start, end, total, lo, hi);
  }
  throw bad("unknown appliance kind");
}

}  // namespace

double ScenarioConfig::revenue_cap_cents() const {
  double per_customer = revenue_cap_per_customer_cents;
  if (per_customer < 0.0) per_customer = pv_enabled ? 270.0 : 350.0;
  return per_customer * total_customers();
}

void ScenarioConfig::validate() const {
  require(n_hems >= 0 && n_sm >= 0 && n_none >= 0 && total_customers() > 0,
          "config: customer counts must be nonnegative with a nonempty pool");
  require(price_min_cents > 0 && price_min_cents <= price_max_cents,
          "config: bad price bounds");
  require(days >= 1, "config: days must be >= 1");
  require(lambda >= 0.0 && lambda <= 1.0, "config: lambda outside [0,1]");
  require(capacity_factor > 0.0 || capacity_kwh > 0.0, "config: no usable capacity limit");
  require(waiting_cost_max >= 0.0, "config: waiting cost must be nonnegative");
  require(background_kwh >= 0.0, "config: background load must be nonnegative");
  require(jitter_fraction >= 0.0 && jitter_fraction < 1.0, "config: jitter fraction outside [0,1)");
  ga.validate();
  if (storage_enabled) storage.validate();
}

std::vector<hems::ApplianceSpec> default_appliances() {
  using namespace hems;
  return {
      interruptible("phev", 19, 7, 10.0, 2.5),
      interruptible("dishwasher", 20, 7, 1.8, 1.0),
      non_interruptible("washing_machine", 8, 21, 1.0, 2),
      non_interruptible("clothes_dryer", 20, 6, 1.5, 2),
      curtailable("air_conditioner", 12, 0, 18.0, 1.0, 2.0),
  };
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path);

  KeyValues kv;
  kv.path = path;
  std::string line;
  int line_no = 0;
  std::vector<std::pair<std::string, std::string>> appliance_lines;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ": row " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!known_key(key))
      throw ParseError(path + ": row " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (key.rfind("appliance.", 0) == 0) {
      appliance_lines.emplace_back(key, value);
      continue;
    }
    kv.values[key] = value;
  }

  ScenarioConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long>(cfg.seed)));
  cfg.days = static_cast<int>(kv.get_int("days", cfg.days));
  cfg.n_hems = static_cast<int>(kv.get_int("customers.hems", cfg.n_hems));
  cfg.n_sm = static_cast<int>(kv.get_int("customers.sm", cfg.n_sm));
  cfg.n_none = static_cast<int>(kv.get_int("customers.none", cfg.n_none));
  if (kv.has("customers.total")) {
    long total = kv.get_int("customers.total", 0);
    if (total != cfg.total_customers())
      throw ParseError(path + ": customers.total does not match the group counts");
  }
  cfg.price_min_cents = kv.get_double("prices.min_cents", cfg.price_min_cents);
  cfg.price_max_cents = kv.get_double("prices.max_cents", cfg.price_max_cents);
  cfg.revenue_cap_per_customer_cents =
      kv.get_double("limits.revenue_cap_cents_per_customer", cfg.revenue_cap_per_customer_cents);
  cfg.capacity_factor = kv.get_double("limits.capacity_factor", cfg.capacity_factor);
  cfg.capacity_kwh = kv.get_double("limits.capacity_kwh", cfg.capacity_kwh);
  cfg.cost_a = kv.get_double("cost.a", cfg.cost_a);
  cfg.cost_b = kv.get_double("cost.b", cfg.cost_b);
  cfg.cost_c = kv.get_double("cost.c", cfg.cost_c);
  cfg.ga.bits_per_price = static_cast<int>(kv.get_int("ga.bits_per_price", cfg.ga.bits_per_price));
  cfg.ga.population = static_cast<int>(kv.get_int("ga.population", cfg.ga.population));
  cfg.ga.generations = static_cast<int>(kv.get_int("ga.generations", cfg.ga.generations));
  cfg.ga.mutation = kv.get_double("ga.mutation", cfg.ga.mutation);
  cfg.ga.crossover = kv.get_double("ga.crossover", cfg.ga.crossover);
  cfg.ga.tournament = static_cast<int>(kv.get_int("ga.tournament", cfg.ga.tournament));
  cfg.ga.elitism = static_cast<int>(kv.get_int("ga.elitism", cfg.ga.elitism));
  cfg.ga.jobs = static_cast<int>(kv.get_int("ga.jobs", cfg.ga.jobs));
  cfg.csm_history_days = static_cast<int>(kv.get_int("csm.history_days", cfg.csm_history_days));
  cfg.waiting_cost_max = kv.get_double("csm.waiting_cost_max", cfg.waiting_cost_max);
  cfg.lambda = kv.get_double("cnone.lambda", cfg.lambda);
  cfg.cnone_history_days =
      static_cast<int>(kv.get_int("cnone.history_days", cfg.cnone_history_days));
  cfg.cnone_history_csv = kv.get_string("cnone.history_csv", cfg.cnone_history_csv);
  cfg.storage_enabled = kv.get_bool("storage.enabled", cfg.storage_enabled);
  cfg.storage.capacity_kwh = kv.get_double("storage.capacity_kwh", cfg.storage.capacity_kwh);
  cfg.storage.rate_kwh = kv.get_double("storage.rate_kwh", cfg.storage.rate_kwh);
  cfg.storage.initial_kwh = kv.get_double("storage.initial_kwh", cfg.storage.initial_kwh);
  cfg.storage.final_kwh = kv.get_double("storage.final_kwh", cfg.storage.final_kwh);
  cfg.storage.sell_back = kv.get_bool("storage.sell_back", cfg.storage.sell_back);
  cfg.pv_enabled = kv.get_bool("pv.enabled", cfg.pv_enabled);
  cfg.pv_peak_kwh = kv.get_double("pv.peak_kwh", cfg.pv_peak_kwh);
  cfg.background_kwh = kv.get_double("background_kwh", cfg.background_kwh);
  cfg.jitter_enabled = kv.get_bool("jitter.enabled", cfg.jitter_enabled);
  cfg.jitter_fraction = kv.get_double("jitter.fraction", cfg.jitter_fraction);
  cfg.baseline.restarts = static_cast<int>(kv.get_int("baseline.restarts", cfg.baseline.restarts));
  cfg.baseline.tol_cents = kv.get_double("baseline.tol_cents", cfg.baseline.tol_cents);
  cfg.baseline.max_rounds =
      static_cast<int>(kv.get_int("baseline.max_rounds", cfg.baseline.max_rounds));

  for (const auto& [key, value] : appliance_lines)
    cfg.appliances.push_back(parse_appliance(key, value, path));

  cfg.validate();
  return cfg;
}

void apply_case(ScenarioConfig& config, int case_id) {
  struct Mix {
    int hems, sm, none;
  };
  static const Mix kCases[] = {
      {0, 0, 100},  {0, 30, 70}, {0, 100, 0}, {30, 70, 0},  {100, 0, 0},
      {50, 30, 20}, {0, 70, 30}, {70, 30, 0}, {30, 60, 10}, {20, 30, 50},
  };
  require(case_id >= 1 && case_id <= 10, "case id must be in 1..10");
  const Mix mix = kCases[case_id - 1];
  const int total = config.total_customers();
  config.n_hems = static_cast<int>(std::lround(mix.hems * total / 100.0));
  config.n_sm = static_cast<int>(std::lround(mix.sm * total / 100.0));
  config.n_none = total - config.n_hems - config.n_sm;
  require(config.n_none >= 0, "case mix does not scale to this pool size");
}

}  // namespace tariff::scenario
