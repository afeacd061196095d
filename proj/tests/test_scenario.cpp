#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tariff/scenario.hpp"

using namespace tariff;
using namespace tariff::scenario;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("scenario_test_tmp") / name) {
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

ScenarioConfig tiny_config() {
  ScenarioConfig cfg;
  cfg.seed = 11;
  cfg.n_hems = 2;
  cfg.n_sm = 2;
  cfg.n_none = 2;
  cfg.csm_history_days = 30;
  cfg.cnone_history_days = 26;
  cfg.ga.population = 20;
  cfg.ga.generations = 4;
  return cfg;
}

}  // namespace

TEST_CASE("config: defaults validate and the revenue cap follows PV") {
  ScenarioConfig cfg;
  cfg.validate();
  CHECK(cfg.revenue_cap_cents() == doctest::Approx(350.0 * 100));
  cfg.pv_enabled = true;
  CHECK(cfg.revenue_cap_cents() == doctest::Approx(270.0 * 100));
  cfg.revenue_cap_per_customer_cents = 300.0;
  CHECK(cfg.revenue_cap_cents() == doctest::Approx(300.0 * 100));
}

TEST_CASE("config: file parsing, unknown keys, appliance lines") {
  TempDir dir("config");
  {
    std::ofstream out(dir.file("good.cfg"));
    out << "# comment\n";
    out << "seed = 9\n";
    out << "customers.hems = 1\ncustomers.sm = 1\ncustomers.none = 3\n";
    out << "ga.population = 20\nga.generations = 4\n";
    out << "appliance.1 = interruptible ev 19 7 10.0 2.5\n";
    out << "appliance.2 = curtailable ac 12 0 18.0 1.0 2.0\n";
  }
  auto cfg = load_config(dir.file("good.cfg"));
  CHECK(cfg.seed == 9);
  CHECK(cfg.n_none == 3);
  CHECK(cfg.appliances.size() == 2);
  CHECK(cfg.appliances[0].window_first == 11);

  {
    std::ofstream out(dir.file("bad.cfg"));
    out << "sed = 9\n";  // typo
  }
  CHECK_THROWS_AS(load_config(dir.file("bad.cfg")), ParseError);

  {
    std::ofstream out(dir.file("badnum.cfg"));
    out << "seed = banana\n";
  }
  CHECK_THROWS_AS(load_config(dir.file("badnum.cfg")), ParseError);
}

TEST_CASE("config: case presets scale to the pool size") {
  ScenarioConfig cfg;
  cfg.n_hems = 0;
  cfg.n_sm = 0;
  cfg.n_none = 20;
  apply_case(cfg, 6);
  CHECK(cfg.n_hems == 10);
  CHECK(cfg.n_sm == 6);
  CHECK(cfg.n_none == 4);
  apply_case(cfg, 5);
  CHECK(cfg.n_hems == 20);
  CHECK(cfg.n_sm == 0);
  CHECK(cfg.n_none == 0);
  CHECK_THROWS_AS(apply_case(cfg, 11), InputError);
}

TEST_CASE("pv: daylight curve is zero outside 8AM-6PM") {
  auto pv = pv_forecast(2.0);
  for (int h = 0; h < 10; ++h) CHECK(pv[h] > 0.0);
  for (int h = 10; h < kSlots; ++h) CHECK(pv[h] == 0.0);
  CHECK(pv[4] > pv[0]);
}

TEST_CASE("history generation: deterministic under a fixed seed") {
  auto specs = default_appliances();
  auto a = generate_csm_history(specs, 30, 0.5, 6.0, 14.0, Rng(77));
  auto b = generate_csm_history(specs, 30, 0.5, 6.0, 14.0, Rng(77));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].days.size() == b[i].days.size());
    for (std::size_t d = 0; d < a[i].days.size(); ++d) {
      CHECK(a[i].days[d].prices == b[i].days[d].prices);
      CHECK(a[i].days[d].kwh == b[i].days[d].kwh);
    }
  }
}

TEST_CASE("history generation: zero waiting cost reproduces the pure optimum") {
  auto specs = default_appliances();
  auto histories = generate_csm_history(specs, 30, 0.0, 6.0, 14.0, Rng(5));
  for (const auto& hist : histories) {
    if (hist.spec.kind == hems::ApplianceKind::Curtailable) continue;
    for (const auto& day : hist.days) {
      auto optimal = hems::schedule_appliance(day.prices, hist.spec);
      CHECK(day.kwh == optimal.kwh);
    }
  }
}

TEST_CASE("history generation: waiting costs create behavioral spread") {
  auto specs = default_appliances();
  auto histories = generate_csm_history(specs, 90, 0.5, 6.0, 14.0, Rng(2024));
  bool spread_seen = false;
  for (const auto& hist : histories) {
    if (hist.spec.kind == hems::ApplianceKind::Curtailable) continue;
    auto schedules = csm::enumerate_schedules(hist.spec);
    auto model = csm::fit_rank_model(schedules, hist.days);
    if (model.probability(0) < 1.0 - 1e-9) spread_seen = true;
  }
  CHECK(spread_seen);
}

TEST_CASE("cnone synthetic truth: feasible and calibrated to 36 kWh/household") {
  auto truth = synthetic_cnone_truth(100);
  truth.validate();
  PriceVector mid(kSlots, 10.0);
  double total = 0.0;
  for (double v : cnone::predict_aggregate(truth, mid)) total += v;
  CHECK(total == doctest::Approx(3600.0).epsilon(1e-9));

  // stays positive across the whole price box
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    PriceVector p(kSlots);
    for (auto& v : p) v = rng.uniform_int(600, 1400) / 100.0;
    Eigen::VectorXd y = cnone::evaluate_linear(truth, p);
    CHECK(y.minCoeff() > 0.0);
  }
}

TEST_CASE("history csv: appliance files round-trip") {
  TempDir dir("histcsv");
  auto specs = default_appliances();
  auto histories = generate_csm_history(specs, 30, 0.5, 6.0, 14.0, Rng(13));
  const auto& hist = histories[0];
  write_history_csv(dir.file("app.csv"), hist.days);
  auto back = read_history_csv(dir.file("app.csv"));
  REQUIRE(back.size() == hist.days.size());
  for (std::size_t d = 0; d < back.size(); ++d) {
    for (int h = 0; h < kSlots; ++h) {
      CHECK(back[d].prices[h] == doctest::Approx(hist.days[d].prices[h]).epsilon(1e-12));
      CHECK(back[d].kwh[h] == doctest::Approx(hist.days[d].kwh[h]).scale(1.0).epsilon(5e-7));
    }
  }
}

TEST_CASE("pool csv: ingest groups days, scales, and names bad rows") {
  TempDir dir("poolcsv");
  {
    std::ofstream out(dir.file("one.csv"));
    out << "date,slot,price_cents,demand_kwh\n";
    for (int h = 0; h < kSlots; ++h) out << "2012-01-01," << h << ",7.50,150000.0\n";
  }
  auto one = ingest_price_demand_csv(dir.file("one.csv"), 100);
  CHECK(one.days() == 1);
  // raw daily 3.6 GWh scaled onto 100 households x 36 kWh
  double total = 0.0;
  for (double v : one.demand_kwh[0]) total += v;
  CHECK(total == doctest::Approx(3600.0).epsilon(1e-9));
  CHECK(one.demand_kwh[0][0] == doctest::Approx(150.0).epsilon(1e-9));

  {
    std::ofstream out(dir.file("bad.csv"));
    out << "date,slot,price_cents,demand_kwh\n";
    for (int h = 0; h < kSlots; ++h) {
      if (h == 15)  // header + 15 rows before it: file row 17
        out << "2012-01-01," << h << ",oops,1.0\n";
      else
        out << "2012-01-01," << h << ",7.50,1.0\n";
    }
  }
  try {
    ingest_price_demand_csv(dir.file("bad.csv"), 100);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 17") != std::string::npos);
  }

  {
    std::ofstream out(dir.file("short.csv"));
    out << "date,slot,price_cents,demand_kwh\n";
    for (int h = 0; h < 20; ++h) out << "2012-01-01," << h << ",7.50,1.0\n";
  }
  CHECK_THROWS_AS(ingest_price_demand_csv(dir.file("short.csv"), 100), ParseError);
}

TEST_CASE("pool csv: emitted pool history re-ingests to the same values") {
  auto history = generate_cnone_history(100, 26, 1.0, 6.0, 14.0, 0.01, Rng(3));
  // Normalize to the ingest target so the scale factor is one.
  double mean = 0.0;
  for (const auto& day : history.demand_kwh)
    for (double v : day) mean += v;
  mean /= history.days();
  for (auto& day : history.demand_kwh)
    for (double& v : day) v *= 3600.0 / mean;

  TempDir dir("roundtrip");
  write_price_demand_csv(dir.file("pool.csv"), history);
  auto back = ingest_price_demand_csv(dir.file("pool.csv"), 100);
  REQUIRE(back.days() == history.days());
  for (int d = 0; d < back.days(); ++d) {
    for (int h = 0; h < kSlots; ++h) {
      CHECK(back.prices[d][h] == doctest::Approx(history.prices[d][h]).epsilon(1e-12));
      CHECK(back.demand_kwh[d][h] ==
            doctest::Approx(history.demand_kwh[d][h]).scale(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("model json: fitted aggregate model survives a write/read cycle") {
  TempDir dir("modeljson");
  auto history = generate_cnone_history(10, 26, 1.0, 6.0, 14.0, 0.01, Rng(4));
  auto fit = cnone::fit_aggregate_demand(history);
  write_aggregate_model_json(fit.model, dir.file("model.json"));
  auto back = read_aggregate_model_json(dir.file("model.json"));  // validates invariants
  for (int h = 0; h < kSlots; ++h)
    CHECK(back.alpha(h) == doctest::Approx(fit.model.alpha(h)).epsilon(1e-12));
}

TEST_CASE("pool: unmetered-only case exposes only the aggregate prediction") {
  auto cfg = tiny_config();
  cfg.n_hems = 0;
  cfg.n_sm = 0;
  cfg.n_none = 6;
  auto pool = build_pool(cfg);
  PriceVector prices(kSlots, 9.0);
  auto responses = pool_responses(pool, prices);
  REQUIRE(responses.size() == 3);
  for (int h = 0; h < kSlots; ++h) {
    CHECK(responses[0].kwh[h] == 0.0);
    CHECK(responses[1].kwh[h] == 0.0);
  }
  auto pred = cnone::predict_aggregate(*pool.none_model, prices);
  for (int h = 0; h < kSlots; ++h)
    CHECK(responses[2].kwh[h] == doctest::Approx(pred[h]).epsilon(1e-12));
}

TEST_CASE("pool: homogeneous scheduled households scale linearly") {
  auto cfg = tiny_config();
  cfg.n_hems = 4;
  cfg.n_sm = 0;
  cfg.n_none = 0;
  auto pool = build_pool(cfg);
  CHECK(pool.hems_homogeneous);
  PriceVector prices(kSlots, 8.0);
  auto responses = pool_responses(pool, prices);
  auto single = hems::household_response(prices, pool.hems_households[0]);
  for (int h = 0; h < kSlots; ++h)
    CHECK(responses[0].kwh[h] == doctest::Approx(4.0 * single.kwh[h]).epsilon(1e-12));
  CHECK(responses[0].bill_cents == doctest::Approx(4.0 * single.bill_cents).epsilon(1e-12));
}

TEST_CASE("pool: day advance applies exactly one rank update per appliance") {
  auto cfg = tiny_config();
  cfg.n_hems = 0;
  cfg.n_sm = 2;
  cfg.n_none = 0;
  auto pool = build_pool(cfg);

  std::vector<int> before;
  for (const auto& customer : pool.sm_customers)
    for (const auto& app : customer.shiftable) before.push_back(app.model.observations());
  for (int leg : before) CHECK(leg == cfg.csm_history_days);

  PriceVector prices(kSlots, 7.0);
  advance_day(pool, prices);
  advance_day(pool, prices);
  advance_day(pool, prices);

  std::size_t idx = 0;
  for (const auto& customer : pool.sm_customers)
    for (const auto& app : customer.shiftable)
      CHECK(app.model.observations() == before[idx++] + 3);
  CHECK(pool.day_index == 3);
}

TEST_CASE("run_case: deterministic and feasible at desk scale") {
  auto cfg = tiny_config();
  auto a = run_case(cfg, 6, false);
  auto b = run_case(cfg, 6, false);
  CHECK(a.prices == b.prices);
  CHECK(a.eval.profit_cents == b.eval.profit_cents);
  CHECK(a.eval.violation == 0.0);
  CHECK(a.n_hems == 3);  // case 6 at N=6: 50/30/20 percent
  CHECK(a.n_sm == 2);
  CHECK(a.n_none == 1);
  CHECK(a.eval.revenue_cents <= cfg.revenue_cap_cents() * 1.0 + 1e-9);
  CHECK(a.trace.size() == static_cast<std::size_t>(cfg.ga.generations));
}

TEST_CASE("run_case: outputs land in the case directory") {
  TempDir dir("outputs");
  auto cfg = tiny_config();
  auto result = run_case(cfg, 1, false);
  write_outputs(result, dir.file("1"));
  CHECK(fs::exists(dir.path / "1" / "result.json"));
  CHECK(fs::exists(dir.path / "1" / "trace.csv"));
  CHECK(fs::exists(dir.path / "1" / "prices.csv"));
  CHECK(fs::exists(dir.path / "1" / "demand.csv"));
}
