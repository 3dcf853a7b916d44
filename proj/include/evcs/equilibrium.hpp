// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "evcs/baselines.hpp"
#include "evcs/network_cost.hpp"

namespace evcs {

/// True iff no EV has a strictly improving unilateral deviation.
bool is_nash(const ScheduleVector& s, const GameContext& ctx);

struct NeReport {
  std::vector<ScheduleVector> equilibria;  // lexicographic order
  std::vector<ScheduleVector> optima;      // all maximizers of w
  double best_sum_payoff = 0.0;
  double worst_ne_sum_payoff = 0.0;
  double pod = 0.0;
  std::uint64_t search_space_size = 0;
};

/// Π_i |S_i|.
std::uint64_t search_space_size(const FleetSpec& fleet);

/// Exhaustive scan of all joint schedules. The payoff table is filled in
/// parallel partitions of the first EV's start and Nash checks are table
/// lookups. PoD = 1 - max w / min_{NE} w.
/// SearchRefusedError above `budget`, SignConventionError when some w >= 0.
NeReport enumerate_equilibria(const GameContext& ctx, std::uint64_t budget = 100'000'000, int jobs = 1);

/// Non-atomic limit: fractions x_t in [0,1] summing to `duration`, water
/// level found by bisection.
ValleyFill nonatomic_valley_fill(std::span<const double> exo, double power_scale, int duration);

struct PodRow {
  int fleet_size = 0;
  double charging_power_kw = 0.0;
  double pod = 0.0;
  std::size_t equilibria = 0;
};

struct PodTrend {
  std::vector<PodRow> rows;
  bool vanishing = false;  // non-increasing sequence, or last value below 0.05
};

/// Throws PreconditionError naming the first violated hypothesis of the
/// zero-PoD result: no individual cost, common window over the whole
/// horizon, memoryless model or α = 0, exo non-increasing on {1..C} and
/// non-decreasing on {T-C+1..T}.
void check_zero_pod_hypotheses(const LoadProfile& exo, int duration, const CostConfig& config);

/// For each finite I, enumerates the symmetric game (a = 1, d = T, C) with
/// per-EV power P = p · reference_fleet_size / I and reports the PoD.
PodTrend pod_nonatomic_check(const LoadProfile& exo, const LoadProfile& ambient, double power_scale, int duration,
                             const std::vector<int>& fleet_sizes, const TransformerParams& params,
                             const CostConfig& config, int reference_fleet_size = 1, int jobs = 1);

}  // namespace evcs
