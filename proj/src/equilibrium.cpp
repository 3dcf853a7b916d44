// SPDX-License-Identifier: Apache-2.0
#include "evcs/equilibrium.hpp"

#include <algorithm>
#include <limits>

#include "evcs/errors.hpp"
#include "evcs/mobility.hpp"
#include "evcs/parallel.hpp"

namespace evcs {

bool is_nash(const ScheduleVector& s, const GameContext& ctx) {
  validate_schedule(ctx.fleet, s);
  const auto current = payoffs(s, ctx);
  ScheduleVector trial = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int alt : action_set(ctx.fleet.ev(i))) {
      if (alt == s[i]) continue;
      trial[i] = alt;
      if (strictly_greater(payoff(i, trial, ctx), current[i])) return false;
    }
    trial[i] = s[i];
  }
  return true;
}

std::uint64_t search_space_size(const FleetSpec& fleet) {
  std::uint64_t size = 1;
  for (const auto& ev : fleet.evs()) {
    const auto width = static_cast<std::uint64_t>(ev.departure - ev.duration + 1 - ev.arrival + 1);
    if (size > std::numeric_limits<std::uint64_t>::max() / width) return std::numeric_limits<std::uint64_t>::max();
    size *= width;
  }
  return size;
}

namespace {

// Mixed-radix codec; EV 0 is the most significant digit.
struct JointIndex {
  std::vector<std::vector<int>> actions;
  std::vector<std::uint64_t> stride;

  explicit JointIndex(const FleetSpec& fleet) {
    for (const auto& ev : fleet.evs()) actions.push_back(action_set(ev));
    stride.assign(actions.size(), 1);
    for (std::size_t i = actions.size(); i-- > 1;) stride[i - 1] = stride[i] * actions[i].size();
  }

  std::size_t digit(std::uint64_t idx, std::size_t i) const { return (idx / stride[i]) % actions[i].size(); }

  ScheduleVector decode(std::uint64_t idx) const {
    ScheduleVector s;
    for (std::size_t i = 0; i < actions.size(); ++i) s.starts.push_back(actions[i][digit(idx, i)]);
    return s;
  }
};

constexpr std::uint64_t kMaxTableEntries = 50'000'000;

}  // namespace

NeReport enumerate_equilibria(const GameContext& ctx, std::uint64_t budget, int jobs) {
  ctx.validate();
  NeReport report;
  report.search_space_size = search_space_size(ctx.fleet);
  if (report.search_space_size > budget)
    throw SearchRefusedError("joint schedule space of size " + std::to_string(report.search_space_size) +
                             " exceeds the budget " + std::to_string(budget));

  const JointIndex index(ctx.fleet);
  const std::size_t I = ctx.fleet.size();
  const std::uint64_t total = report.search_space_size;
  const std::size_t partitions = index.actions[0].size();
  const std::uint64_t block = index.stride[0];
  const bool use_table = total * I <= kMaxTableEntries;

  std::vector<double> table(use_table ? total * I : 0);
  std::vector<double> welfare(total);
  parallel_for(partitions, jobs, [&](std::size_t p) {
    for (std::uint64_t idx = p * block; idx < (p + 1) * block; ++idx) {
      const auto u = payoffs(index.decode(idx), ctx);
      double w = 0.0;
      for (std::size_t i = 0; i < I; ++i) {
        w += u[i];
        if (use_table) table[idx * I + i] = u[i];
      }
      welfare[idx] = w;
    }
  });

  std::vector<char> nash(total, 1);
  parallel_for(partitions, jobs, [&](std::size_t p) {
    for (std::uint64_t idx = p * block; idx < (p + 1) * block; ++idx) {
      if (!use_table) {
        nash[idx] = is_nash(index.decode(idx), ctx);
        continue;
      }
      for (std::size_t i = 0; i < I && nash[idx]; ++i) {
        const double own = table[idx * I + i];
        const auto d = index.digit(idx, i);
        const std::uint64_t base = idx - d * index.stride[i];
        for (std::size_t k = 0; k < index.actions[i].size(); ++k) {
          if (k != d && strictly_greater(table[(base + k * index.stride[i]) * I + i], own)) {
            nash[idx] = 0;
            break;
          }
        }
      }
    }
  });

  report.best_sum_payoff = -std::numeric_limits<double>::infinity();
  report.worst_ne_sum_payoff = std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (!(welfare[idx] < 0.0))
      throw SignConventionError("sum-payoff " + std::to_string(welfare[idx]) + " at " +
                                to_string(index.decode(idx)) + " is not strictly negative");
    report.best_sum_payoff = std::max(report.best_sum_payoff, welfare[idx]);
    if (nash[idx]) {
      report.equilibria.push_back(index.decode(idx));
      report.worst_ne_sum_payoff = std::min(report.worst_ne_sum_payoff, welfare[idx]);
    }
  }
  for (std::uint64_t idx = 0; idx < total; ++idx)
    if (welfare[idx] == report.best_sum_payoff) report.optima.push_back(index.decode(idx));
  if (report.equilibria.empty()) throw PreconditionError("no pure Nash equilibrium in this game");
  report.pod = 1.0 - report.best_sum_payoff / report.worst_ne_sum_payoff;
  return report;
}

ValleyFill nonatomic_valley_fill(std::span<const double> exo, double power_scale, int duration) {
  if (duration < 0 || duration > static_cast<int>(exo.size()))
    throw FeasibilityError("charging duration must lie in [0, T]");
  return valley_fill_exact(exo, duration, power_scale, 0.0, 1.0);
}

void check_zero_pod_hypotheses(const LoadProfile& exo, int duration, const CostConfig& config) {
  const int T = exo.size();
  if (config.ev_cost_mode != EvCostMode::Zero && config.beta != 0.0)
    throw PreconditionError("hypothesis violated: individual EV cost must be zero");
  if (config.window_mode != WindowMode::Common)
    throw PreconditionError("hypothesis violated: cost window must be common to all EVs");
  if (!config.common_window.empty()) {
    auto w = config.common_window;
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    if (static_cast<int>(w.size()) != T)
      throw PreconditionError("hypothesis violated: common window must cover the whole horizon");
  }
  if (config.inertia_mode != InertiaMode::Memoryless && config.alpha != 0.0)
    throw PreconditionError("hypothesis violated: memoryless thermal model or alpha = 0 required");
  if (duration < 1 || duration > T) throw PreconditionError("hypothesis violated: 1 <= C <= T");
  const auto v = exo.values();
  for (int t = 1; t < duration; ++t)
    if (v[t] > v[t - 1])
      throw PreconditionError("hypothesis violated: exogenous demand must be non-increasing on {1..C}");
  for (int t = T - duration + 1; t < T; ++t)
    if (v[t] < v[t - 1])
      throw PreconditionError("hypothesis violated: exogenous demand must be non-decreasing on {T-C+1..T}");
}

PodTrend pod_nonatomic_check(const LoadProfile& exo, const LoadProfile& ambient, double power_scale, int duration,
                             const std::vector<int>& fleet_sizes, const TransformerParams& params,
                             const CostConfig& config, int reference_fleet_size, int jobs) {
  check_zero_pod_hypotheses(exo, duration, config);
  if (fleet_sizes.empty()) throw PreconditionError("no fleet sizes given");
  PodTrend trend;
  const int T = exo.size();
  for (int I : fleet_sizes) {
    const double power = power_scale * static_cast<double>(reference_fleet_size) / static_cast<double>(I);
    GameContext ctx{exo, ambient, symmetric_fleet(exo.grid(), I, power, 1, T, duration), params, config, {}};
    const auto report = enumerate_equilibria(ctx, 100'000'000, jobs);
    trend.rows.push_back({I, power, report.pod, report.equilibria.size()});
  }
  bool non_increasing = true;
  for (std::size_t k = 1; k < trend.rows.size(); ++k)
    non_increasing = non_increasing && trend.rows[k].pod <= trend.rows[k - 1].pod + 1e-12;
  trend.vanishing = non_increasing || trend.rows.back().pod < 0.05;
  return trend;
}

}  // namespace evcs
