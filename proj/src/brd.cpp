// SPDX-License-Identifier: Apache-2.0
#include "evcs/brd.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "evcs/errors.hpp"

namespace evcs {

void BrdConfig::validate() const {
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");
}

int best_response(std::size_t i, const ScheduleVector& s, const GameContext& ctx, Rng& rng,
                  TieBreak tie_break) {
  const auto candidates = action_set(ctx.fleet.ev(i));
  if (candidates.size() == 1) return candidates.front();

  ScheduleVector trial = s;
  std::vector<double> values(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    trial[i] = candidates[k];
    values[k] = payoff(i, trial, ctx);
  }
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<int> maximizers;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (!strictly_greater(best, values[k])) maximizers.push_back(candidates[k]);

  if (tie_break == TieBreak::KeepCurrent &&
      std::find(maximizers.begin(), maximizers.end(), s[i]) != maximizers.end())
    return s[i];
  if (maximizers.size() == 1) return maximizers.front();
  std::uniform_int_distribution<std::size_t> pick(0, maximizers.size() - 1);
  return maximizers[pick(rng)];
}

double schedule_change_norm(const ScheduleVector& prev, const ScheduleVector& next) {
  if (prev.size() != next.size()) throw DimensionError("schedules have different lengths");
  int norm = 0;
  for (std::size_t i = 0; i < prev.size(); ++i) norm = std::max(norm, std::abs(prev[i] - next[i]));
  return norm;
}

namespace {

ScheduleVector initial_schedule(const GameContext& ctx, const BrdConfig& config, Rng& rng) {
  ScheduleVector s;
  switch (config.initial) {
    case InitialSchedule::Arrival:
      for (const auto& ev : ctx.fleet.evs()) s.starts.push_back(ev.arrival);
      break;
    case InitialSchedule::Random:
      for (const auto& ev : ctx.fleet.evs()) {
        std::uniform_int_distribution<int> pick(ev.arrival, ev.departure - ev.duration + 1);
        s.starts.push_back(pick(rng));
      }
      break;
    case InitialSchedule::Given:
      s = config.given;
      break;
  }
  validate_schedule(ctx.fleet, s);
  return s;
}

std::vector<std::size_t> update_order(const ScheduleVector& previous, UpdateOrder order) {
  std::vector<std::size_t> idx(previous.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (order == UpdateOrder::StartTimeAscending)
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return previous[a] < previous[b]; });
  return idx;
}

}  // namespace

BrdResult run_brd(const GameContext& ctx, const BrdConfig& config) {
  ctx.validate();
  config.validate();
  Rng rng(config.seed);

  BrdResult result;
  result.potential_kind = applicable_potential(ctx.config);
  ScheduleVector s = initial_schedule(ctx, config, rng);
  const std::size_t fleet_size = s.size();

  auto record = [&](int round, std::size_t ev) {
    const auto u = payoffs(s, ctx);
    std::optional<double> phi;
    if (result.potential_kind) {
      phi = potential(*result.potential_kind, s, ctx);
      result.potential_trajectory.push_back(*phi);
    }
    for (std::size_t j = 0; j < fleet_size; ++j) result.payoff_trajectories[j].push_back(u[j]);
    result.steps.push_back({round, ev, s[ev], u[ev], phi});
  };

  result.payoff_trajectories.assign(fleet_size, {});
  {
    const auto u = payoffs(s, ctx);
    std::optional<double> phi;
    if (result.potential_kind) {
      phi = potential(*result.potential_kind, s, ctx);
      result.potential_trajectory.push_back(*phi);
    }
    for (std::size_t j = 0; j < fleet_size; ++j) {
      result.payoff_trajectories[j].push_back(u[j]);
      result.steps.push_back({0, j, s[j], u[j], phi});
    }
  }

  std::vector<ScheduleVector> history{s};
  bool converged = false;
  int m = 0;
  while (m < config.max_rounds) {
    ++m;
    const ScheduleVector previous = s;
    for (std::size_t i : update_order(previous, config.order)) {
      s[i] = best_response(i, s, ctx, rng, TieBreak::KeepCurrent);
      record(m, i);
    }
    history.push_back(s);
    if (schedule_change_norm(previous, s) <= config.tolerance) {
      converged = true;
      break;
    }
  }

  result.schedule = s;
  result.rounds_used = m;
  result.converged = converged;
  result.rounds_to_fixed_point = m;
  for (int r = 1; r <= m; ++r) {
    if (history[r] == s) {
      result.rounds_to_fixed_point = r;
      break;
    }
  }
  return result;
}

}  // namespace evcs
