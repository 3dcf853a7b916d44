// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "evcs/model.hpp"

namespace evcs {

/// Per-EV continuous charging power profiles (kW), one row per EV.
struct ContinuousProfileSet {
  TimeGrid grid;
  std::vector<std::vector<double>> power_kw;
  bool converged = true;
  int iterations = 0;

  /// Σ_i x_{i,t}.
  std::vector<double> aggregate() const;
};

/// Rectangular EV load as a profile set (P during [s_i, s_i + C_i - 1]).
ContinuousProfileSet rectangular_profiles(const FleetSpec& fleet, const ScheduleVector& s);

/// Energy an EV must receive, in kW·slots: C_i · P.
double energy_need_kw_slots(const FleetSpec& fleet, std::size_t ev_index);

/// s_i = a_i.
ScheduleVector plug_and_charge(const FleetSpec& fleet);

struct ValleyFill {
  std::vector<double> x;
  double level = 0.0;  // water level L*
};

/// Water-filling: x_t = clamp((L* - exo_t) / p, lower, upper) with L* found
/// by bisection so that Σ x_t = energy (|Σx - energy| <= 1e-9 · energy).
ValleyFill valley_fill_exact(std::span<const double> exo, double energy, double power_scale,
                             double lower, double upper);

/// Euclidean projection of y onto {lower <= x <= upper, Σ x = total}, exact
/// via breakpoint search.
std::vector<double> project_capped_simplex(std::span<const double> y, double total, double lower,
                                           double upper);

struct GanOptions {
  double penalty_weight = 0.5;
  int max_iters = 2000;
  double tolerance = 1e-6;  // max profile change (kW) between iterations
  double max_power_kw = 0.0;  // <= 0: use the fleet charging power
};

/// Synchronous price-broadcast iteration converging to an aggregate valley
/// fill. Non-convergence is reported through `converged`.
ContinuousProfileSet gan_style_schedule(const FleetSpec& fleet, const LoadProfile& exo,
                                        const GanOptions& options = {});

/// Each EV spreads its energy over its window in proportion to
/// δ_t = max L^exo - L^exo_t; capped slots spill their excess uniformly over
/// the remaining slots. Flat demand falls back to a uniform split.
ContinuousProfileSet shinwari_style_schedule(const FleetSpec& fleet, const LoadProfile& exo,
                                             double max_power_kw = 0.0);

}  // namespace evcs
