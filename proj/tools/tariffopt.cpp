// Day-ahead dynamic pricing optimizer: GA pricing over scheduled, learned,
// and aggregated customer demand models.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tariff/scenario.hpp"

namespace {

using namespace tariff;
namespace fs = std::filesystem;

std::string default_config_path(const std::string& positional) {
  if (!positional.empty()) return positional;
  if (const char* env = std::getenv("TARIFFOPT_CONFIG")) return env;
  throw InputError("no config given and TARIFFOPT_CONFIG is not set");
}

scenario::ScenarioConfig load(const std::string& path, long seed_override, int jobs) {
  auto cfg = scenario::load_config(path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (jobs > 0) cfg.ga.jobs = jobs;
  return cfg;
}

void print_case_line(const scenario::CaseResult& r, const std::string& label) {
  std::printf("%-10s hems/sm/none %3d/%3d/%3d  revenue %10.2f  cost %10.2f  profit %10.2f"
              "  violation %.3g  %.1fs\n",
              label.c_str(), r.n_hems, r.n_sm, r.n_none, r.eval.revenue_cents / 100.0,
              r.eval.cost_cents / 100.0, r.eval.profit_cents / 100.0, r.eval.violation,
              r.wall_seconds);
}

std::vector<int> parse_case_list(const std::string& text) {
  std::vector<int> cases;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) cases.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  require(!cases.empty(), "empty case list");
  return cases;
}

int run_fit_cnone(const std::string& csv, double lambda, int pool, const std::string& out) {
  auto history = scenario::ingest_price_demand_csv(csv, pool, lambda);
  auto fit = cnone::fit_aggregate_demand(history);
  scenario::write_aggregate_model_json(fit.model, out);
  std::printf("fitted %d days (lambda %.3f, pool %d) -> %s\n", history.days(), lambda, pool,
              out.c_str());
  std::printf("qp: %s, %d iterations, primal %.2e, dual %.2e\n",
              numerics::to_string(fit.report.status).c_str(), fit.report.iterations,
              fit.report.primal_residual, fit.report.dual_residual);
  return 0;
}

int run_gen_history(const scenario::ScenarioConfig& cfg, int days, const std::string& out_dir) {
  const auto appliances = cfg.appliances.empty() ? scenario::default_appliances() : cfg.appliances;
  Rng root(cfg.seed);
  int households = std::max(1, cfg.n_sm);
  for (int i = 0; i < households; ++i) {
    auto histories = scenario::generate_csm_history(appliances, days, cfg.waiting_cost_max,
                                                    cfg.price_min_cents, cfg.price_max_cents,
                                                    root.child(1000 + i));
    fs::path dir = fs::path(out_dir) / ("household_" + std::to_string(i + 1));
    fs::create_directories(dir);
    for (const auto& hist : histories)
      scenario::write_history_csv((dir / (hist.spec.name + ".csv")).string(), hist.days);
  }
  if (cfg.n_none > 0) {
    auto pool_history =
        scenario::generate_cnone_history(cfg.n_none, std::max(days, 25), cfg.lambda,
                                         cfg.price_min_cents, cfg.price_max_cents, 0.01,
                                         root.child(2000));
    fs::create_directories(out_dir);
    scenario::write_price_demand_csv((fs::path(out_dir) / "cnone.csv").string(), pool_history);
  }
  std::printf("wrote %d-day histories for %d household(s) under %s\n", days, households,
              out_dir.c_str());
  return 0;
}

int run_run_case(const scenario::ScenarioConfig& cfg, int case_id, bool with_baseline,
                 const std::string& out_dir) {
  auto result = scenario::run_case(cfg, case_id, with_baseline);
  std::string label = case_id > 0 ? "case " + std::to_string(case_id) : "custom";
  print_case_line(result, label);
  if (result.baseline) {
    std::printf("%-10s baseline profit %10.2f  revenue %10.2f  rounds %d\n", "",
                result.baseline->profit_cents / 100.0, result.baseline->revenue_cents / 100.0,
                result.baseline->rounds);
  }
  std::string sub = case_id > 0 ? std::to_string(case_id) : "custom";
  scenario::write_outputs(result, (fs::path(out_dir) / sub).string());
  return 0;
}

int run_compare(const scenario::ScenarioConfig& cfg, const std::vector<int>& cases,
                const std::string& out_dir) {
  std::printf("%-6s %12s %12s %14s %16s\n", "case", "ga_profit", "ga_revenue", "iter_profit",
              "iter_revenue");
  for (int k : cases) {
    auto result = scenario::run_case(cfg, k, true);
    std::printf("%-6d %12.2f %12.2f %14.2f %16.2f\n", k, result.eval.profit_cents / 100.0,
                result.eval.revenue_cents / 100.0, result.baseline->profit_cents / 100.0,
                result.baseline->revenue_cents / 100.0);
    scenario::write_outputs(result, (fs::path(out_dir) / std::to_string(k)).string());
  }
  return 0;
}

int run_storage_study(scenario::ScenarioConfig cfg, const std::string& out_dir) {
  // All households scheduled, PV on the roof, battery in the garage; the two
  // runs differ only in whether the battery may export.
  scenario::apply_case(cfg, 5);
  cfg.storage_enabled = true;
  cfg.pv_enabled = true;

  scenario::ScenarioConfig no_sell = cfg;
  no_sell.storage.sell_back = false;
  scenario::ScenarioConfig sell = cfg;
  sell.storage.sell_back = true;

  auto r_no = scenario::run_case(no_sell, 0, false);
  auto r_yes = scenario::run_case(sell, 0, false);
  std::printf("%-28s %12s %12s %12s\n", "scenario", "revenue", "cost", "profit");
  std::printf("%-28s %12.2f %12.2f %12.2f\n", "storage (no selling back)",
              r_no.eval.revenue_cents / 100.0, r_no.eval.cost_cents / 100.0,
              r_no.eval.profit_cents / 100.0);
  std::printf("%-28s %12.2f %12.2f %12.2f\n", "storage (selling back)",
              r_yes.eval.revenue_cents / 100.0, r_yes.eval.cost_cents / 100.0,
              r_yes.eval.profit_cents / 100.0);

  // Household-side check at the sell-back run's prices.
  hems::HouseholdSpec with_storage;
  with_storage.appliances = cfg.appliances.empty() ? scenario::default_appliances()
                                                   : cfg.appliances;
  with_storage.background_kwh.assign(kSlots, cfg.background_kwh);
  with_storage.pv_kwh = scenario::pv_forecast(cfg.pv_peak_kwh);
  hems::HouseholdSpec without_storage = with_storage;
  with_storage.storage = sell.storage;
  double bill_with = hems::household_response(r_yes.prices, with_storage).bill_cents;
  double bill_without = hems::household_response(r_yes.prices, without_storage).bill_cents;
  std::printf("household bill at final prices: %.2f with storage, %.2f without\n",
              bill_with / 100.0, bill_without / 100.0);

  scenario::write_outputs(r_no, (fs::path(out_dir) / "storage_no_sellback").string());
  scenario::write_outputs(r_yes, (fs::path(out_dir) / "storage_sellback").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"day-ahead dynamic pricing optimizer"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", csv_path, model_out = "cnone_model.json";
  std::string case_list = "1,3,5,6";
  long seed = -1;
  int case_id = 0, days = 90, jobs = 0, pool = 100;
  double lambda = 1.0;
  bool with_baseline = false;

  auto* fit = app.add_subcommand("fit-cnone", "fit the aggregate demand model from a CSV feed");
  fit->add_option("csv", csv_path, "history CSV (date,slot,price_cents,demand_kwh)")->required();
  fit->add_option("--lambda", lambda, "forgetting factor in [0,1]");
  fit->add_option("--pool", pool, "number of customers behind the feed");
  fit->add_option("--out", model_out, "output model JSON path");

  auto* gen = app.add_subcommand("gen-history", "write synthetic smart-meter histories");
  gen->add_option("config", config_path, "scenario config file");
  gen->add_option("--days", days, "days of history");
  gen->add_option("--seed", seed, "seed override");
  gen->add_option("--out", out_dir, "output directory");

  auto* run = app.add_subcommand("run-case", "optimize prices for one scenario");
  run->add_option("config", config_path, "scenario config file");
  run->add_option("--case", case_id, "customer-mix preset 1..10 (0 = config counts)");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "fitness evaluation workers");
  run->add_flag("--baseline", with_baseline, "also run the iterative baseline");

  auto* cmp = app.add_subcommand("compare", "GA vs iterative baseline across cases");
  cmp->add_option("config", config_path, "scenario config file");
  cmp->add_option("--cases", case_list, "comma-separated case ids");
  cmp->add_option("--seed", seed, "seed override");
  cmp->add_option("--out", out_dir, "output directory");
  cmp->add_option("--jobs", jobs, "fitness evaluation workers");

  auto* sto = app.add_subcommand("storage-study", "sell-back vs no-sell-back storage scenarios");
  sto->add_option("config", config_path, "scenario config file");
  sto->add_option("--seed", seed, "seed override");
  sto->add_option("--out", out_dir, "output directory");
  sto->add_option("--jobs", jobs, "fitness evaluation workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit) return run_fit_cnone(csv_path, lambda, pool, model_out);
    auto cfg = load(default_config_path(config_path), seed, jobs);
    if (*gen) return run_gen_history(cfg, days, out_dir);
    if (*run) return run_run_case(cfg, case_id, with_baseline, out_dir);
    if (*cmp) return run_compare(cfg, parse_case_list(case_list), out_dir);
    if (*sto) return run_storage_study(cfg, out_dir);
  } catch (const tariff::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
