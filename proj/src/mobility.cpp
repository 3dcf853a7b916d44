// SPDX-License-Identifier: Apache-2.0
#include "evcs/mobility.hpp"

#include <algorithm>
#include <cmath>

#include "evcs/errors.hpp"

namespace evcs {

FleetSpec symmetric_fleet(TimeGrid grid, int fleet_size, double charging_power_kw, int arrival,
                          int departure, int duration) {
  if (fleet_size < 1) throw DomainError("fleet size must be >= 1");
  std::vector<EvSpec> evs;
  for (int i = 1; i <= fleet_size; ++i) evs.push_back({i, arrival, departure, duration});
  return FleetSpec(grid, std::move(evs), charging_power_kw);
}

FleetSpec random_fleet(TimeGrid grid, int fleet_size, double charging_power_kw, Rng& rng,
                       const MobilityStats& stats) {
  if (fleet_size < 1) throw DomainError("fleet size must be >= 1");
  const int T = grid.slot_count();
  std::normal_distribution<double> arrival(stats.arrival_mean, stats.arrival_sd);
  std::normal_distribution<double> departure(stats.departure_mean, stats.departure_sd);
  std::normal_distribution<double> duration(stats.duration_mean, stats.duration_sd);
  auto draw = [&](std::normal_distribution<double>& d, int lo, int hi) {
    return std::clamp(static_cast<int>(std::lround(d(rng))), lo, hi);
  };

  std::vector<EvSpec> evs;
  for (int i = 1; i <= fleet_size; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt <= stats.max_redraws && !ok; ++attempt) {
      EvSpec ev{i, draw(arrival, 1, T), draw(departure, 1, T), draw(duration, 1, T)};
      if (ev.departure - ev.arrival + 1 < ev.duration && ev.arrival + ev.duration - 1 <= T)
        ev.departure = ev.arrival + ev.duration - 1;
      if (ev.departure - ev.arrival + 1 >= ev.duration) {
        evs.push_back(ev);
        ok = true;
      }
    }
    if (!ok)
      throw FeasibilityError("EV " + std::to_string(i) + ": no feasible mobility draw after " +
                             std::to_string(stats.max_redraws) + " redraws");
  }
  return FleetSpec(grid, std::move(evs), charging_power_kw);
}

}  // namespace evcs
