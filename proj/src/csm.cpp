#include "tariff/csm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace tariff::csm {

namespace {

int shiftable_run_slots(const hems::ApplianceSpec& spec) {
  if (spec.kind == hems::ApplianceKind::NonInterruptible) return spec.run_slots;
  return static_cast<int>(std::ceil(spec.total_kwh / spec.rated_kwh - 1e-9));
}

}  // namespace

ScheduleSet enumerate_schedules(const hems::ApplianceSpec& spec, int horizon) {
  spec.validate(horizon);
  require(spec.kind != hems::ApplianceKind::Curtailable,
          spec.name + ": schedule enumeration applies to shiftable appliances");
  const int T = spec.window_length();
  const int L = shiftable_run_slots(spec);
  if (L > T) throw InfeasibleError(spec.name + ": window too short for required energy");

  ScheduleSet set;
  set.appliance = spec.name;
  set.slots_per_schedule = L;
  double total = spec.kind == hems::ApplianceKind::NonInterruptible
                     ? spec.rated_kwh * spec.run_slots
                     : spec.total_kwh;
  set.energy_per_slot = total / L;

  if (spec.kind == hems::ApplianceKind::NonInterruptible) {
    set.enumeration = ScheduleSet::Enumeration::ContiguousStarts;
    for (int start = spec.window_first; start + L - 1 <= spec.window_last; ++start) {
      std::vector<int> slots(L);
      for (int i = 0; i < L; ++i) slots[i] = start + i;
      set.schedules.push_back(std::move(slots));
    }
    return set;
  }

  set.enumeration = ScheduleSet::Enumeration::Combinations;
  // C(T, L) can overflow quickly; count up front against the cap.
  double combos = 1.0;
  for (int i = 0; i < L; ++i) combos = combos * (T - i) / (i + 1);
  if (combos > kMaxSchedules)
    throw InputError(spec.name + ": schedule count " + std::to_string(combos) +
                     " exceeds the supported maximum of " + std::to_string(kMaxSchedules));

  std::vector<int> pick(L);
  for (int i = 0; i < L; ++i) pick[i] = i;
  for (;;) {
    std::vector<int> slots(L);
    for (int i = 0; i < L; ++i) slots[i] = spec.window_first + pick[i];
    set.schedules.push_back(std::move(slots));
    int i = L - 1;
    while (i >= 0 && pick[i] == T - L + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < L; ++j) pick[j] = pick[j - 1] + 1;
  }
  return set;
}

std::vector<RankedCost> rank_costs(const PriceVector& prices, const ScheduleSet& schedules) {
  auto cents = to_hundredths(prices);
  std::vector<RankedCost> ranked;
  ranked.reserve(schedules.schedules.size());
  for (int idx = 0; idx < schedules.count(); ++idx) {
    std::int64_t cost = 0;
    for (int h : schedules.schedules[idx]) cost += cents[h];
    ranked.push_back({idx, cost});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCost& a, const RankedCost& b) {
                     return a.cost_hundredths < b.cost_hundredths;
                   });
  return ranked;
}

RankProbabilityModel::RankProbabilityModel(int ranks) {
  require(ranks >= 1, "rank model needs at least one schedule");
  counts_.assign(ranks, 0.0);
}

double RankProbabilityModel::probability(int rank) const {
  if (days_ == 0) return 1.0 / ranks();
  return counts_[rank] / days_;
}

std::vector<double> RankProbabilityModel::probabilities() const {
  std::vector<double> p(counts_.size());
  for (int i = 0; i < ranks(); ++i) p[i] = probability(i);
  return p;
}

RankProbabilityModel update_rank_probabilities(const RankProbabilityModel& model,
                                               const std::vector<RankedCost>& ranked,
                                               int observed_schedule_index) {
  const int k = model.ranks();
  require(static_cast<int>(ranked.size()) == k, "rank model/schedule count mismatch");

  int observed_rank = -1;
  for (int i = 0; i < k; ++i) {
    if (ranked[i].schedule_index == observed_schedule_index) {
      observed_rank = i;
      break;
    }
  }
  require(observed_rank >= 0, "observed schedule is not one of the candidates");

  // Ranks whose cost equals the observed one (the observed rank included).
  std::vector<int> tied;
  for (int i = 0; i < k; ++i) {
    if (ranked[i].cost_hundredths == ranked[observed_rank].cost_hundredths) tied.push_back(i);
  }

  std::vector<double> delta(k, 0.0);
  if (tied.size() == 1) {
    delta[observed_rank] = 1.0;  // unique cost
  } else {
    double denom = 0.0;
    for (int i : tied) denom += model.probability(i);
    if (denom > 0.0) {
      for (int i : tied) delta[i] = model.probability(i) / denom;
    } else {
      for (int i : tied) delta[i] = 1.0 / static_cast<double>(tied.size());
    }
  }

  // P_i(d+1) = P_i(d) + (delta_i - P_i(d)) / (d+1), kept as pseudo-counts.
  RankProbabilityModel next = model;
  for (int i = 0; i < k; ++i) next.counts_[i] += delta[i];
  next.days_ = model.days_ + 1;
  return next;
}

ShiftableExpectation expected_shiftable_demand(const PriceVector& prices,
                                               const RankProbabilityModel& model,
                                               const ScheduleSet& schedules) {
  require(model.ranks() == schedules.count(), "rank model/schedule count mismatch");
  auto ranked = rank_costs(prices, schedules);

  ShiftableExpectation out;
  out.kwh.assign(prices.size(), 0.0);
  for (int rank = 0; rank < schedules.count(); ++rank) {
    double p = model.probability(rank);
    if (p == 0.0) continue;
    const auto& slots = schedules.schedules[ranked[rank].schedule_index];
    double weight = schedules.energy_per_slot * p;
    for (int h : slots) out.kwh[h] += weight;
    out.bill_cents += ranked[rank].cost_hundredths * 0.01 * schedules.energy_per_slot * p;
  }
  return out;
}

int find_schedule_index(const ScheduleSet& schedules, const std::vector<int>& slots) {
  for (int i = 0; i < schedules.count(); ++i) {
    if (schedules.schedules[i] == slots) return i;
  }
  return -1;
}

std::vector<int> used_slots(const std::vector<double>& kwh) {
  std::vector<int> used;
  for (std::size_t h = 0; h < kwh.size(); ++h) {
    if (kwh[h] > 1e-9) used.push_back(static_cast<int>(h));
  }
  return used;
}

RankProbabilityModel fit_rank_model(const ScheduleSet& schedules,
                                    const std::vector<DayRecord>& history) {
  RankProbabilityModel model(schedules.count());
  for (const auto& day : history) {
    int idx = find_schedule_index(schedules, used_slots(day.kwh));
    require(idx >= 0, schedules.appliance + ": history day uses an unknown schedule");
    model = update_rank_probabilities(model, rank_costs(day.prices, schedules), idx);
  }
  return model;
}

CurtailableDemandModel fit_curtailable_demand(const std::vector<DayRecord>& history,
                                              int window_first, int window_last,
                                              const CurtailableFitOptions& opts) {
  require(window_first >= 0 && window_first <= window_last && window_last < kSlots,
          "curtailable fit: bad window");
  const int T = window_last - window_first + 1;
  const int D = static_cast<int>(history.size());
  require(D >= T + 1, "curtailable fit: need at least window length + 1 days");

  // Shared design matrix [1, p_window] across the per-slot regressions.
  Eigen::MatrixXd X(D, T + 1);
  for (int d = 0; d < D; ++d) {
    X(d, 0) = 1.0;
    for (int j = 0; j < T; ++j) X(d, j + 1) = history[d].prices[window_first + j];
  }
  Eigen::MatrixXd G = X.transpose() * X;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  double emin = eig.eigenvalues().minCoeff();
  double emax = eig.eigenvalues().maxCoeff();
  bool ill = emin <= 0.0 || emax / emin > opts.cond_threshold;
  if (ill) {
    if (!opts.allow_ridge)
      throw SolverError("curtailable fit: singular design (rank-deficient price history)");
    G += opts.ridge * Eigen::MatrixXd::Identity(T + 1, T + 1);
  }
  Eigen::LDLT<Eigen::MatrixXd> solver(G);

  CurtailableDemandModel model;
  model.window_first = window_first;
  model.window_last = window_last;
  model.intercept.resize(T);
  model.coef.assign(T, std::vector<double>(T, 0.0));

  Eigen::VectorXd y(D);
  for (int slot = 0; slot < T; ++slot) {
    for (int d = 0; d < D; ++d) y(d) = history[d].kwh[window_first + slot];
    Eigen::VectorXd theta = solver.solve(X.transpose() * y);
    model.intercept[slot] = theta(0);
    for (int j = 0; j < T; ++j) model.coef[slot][j] = theta(j + 1);
  }
  return model;
}

CurtailablePrediction predict_curtailable(const CurtailableDemandModel& model,
                                          const PriceVector& prices) {
  const int T = model.window_length();
  CurtailablePrediction out;
  out.kwh.assign(prices.size(), 0.0);
  for (int slot = 0; slot < T; ++slot) {
    double v = model.intercept[slot];
    for (int j = 0; j < T; ++j) v += model.coef[slot][j] * prices[model.window_first + j];
    v = std::max(0.0, v);  // the linear model extrapolates below zero
    out.kwh[model.window_first + slot] = v;
    out.bill_cents += prices[model.window_first + slot] * v;
  }
  return out;
}

}  // namespace tariff::csm
