// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "evcs/model.hpp"
#include "evcs/random.hpp"

namespace evcs {

/// Identical EVs: same arrival, departure and duration.
FleetSpec symmetric_fleet(TimeGrid grid, int fleet_size, double charging_power_kw, int arrival,
                          int departure, int duration);

/// Gaussian mobility statistics (slot units). Defaults are the survey-derived
/// values for a 5 pm - 8 am window of 30 half-hour slots.
struct MobilityStats {
  double arrival_mean = 4.0;
  double arrival_sd = 1.5;
  double departure_mean = 29.0;
  double departure_sd = 0.75;
  double duration_mean = 5.99;
  double duration_sd = 1.14;
  int max_redraws = 100;
};

/// Draws each EV's (a, d, C) as rounded Gaussians clamped to [1, T]. When the
/// window is too short the departure is pushed to a + C - 1 if that still fits
/// in the grid; otherwise the EV is redrawn (FeasibilityError after
/// `max_redraws` failures).
FleetSpec random_fleet(TimeGrid grid, int fleet_size, double charging_power_kw, Rng& rng,
                       const MobilityStats& stats = {});

}  // namespace evcs
