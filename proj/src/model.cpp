// SPDX-License-Identifier: Apache-2.0
#include "evcs/model.hpp"

#include <cmath>
#include <sstream>

#include "evcs/errors.hpp"

namespace evcs {

TimeGrid::TimeGrid(int slot_count, double slot_duration_hours)
    : slot_count_(slot_count), slot_duration_hours_(slot_duration_hours) {
  if (slot_count < 1) throw DomainError("time grid needs at least one slot");
  if (!(slot_duration_hours > 0.0) || !std::isfinite(slot_duration_hours))
    throw DomainError("slot duration must be positive");
}

const char* units_name(Units units) {
  switch (units) {
    case Units::Kilowatts: return "kW";
    case Units::Celsius: return "degC";
    case Units::PricePerKwh: return "price_per_kWh";
    case Units::Dimensionless: return "1";
  }
  return "?";
}

LoadProfile::LoadProfile(TimeGrid grid, std::vector<double> values, Units units)
    : grid_(grid), values_(std::move(values)), units_(units) {
  if (static_cast<int>(values_.size()) != grid_.slot_count())
    throw DimensionError("profile has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(grid_.slot_count()) + " slots");
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t]))
      throw ValidationError("non-finite value at slot " + std::to_string(t + 1));
    if (units_ == Units::Kilowatts && values_[t] < 0.0)
      throw ValidationError("negative demand at slot " + std::to_string(t + 1));
  }
}

LoadProfile LoadProfile::constant(TimeGrid grid, double value, Units units) {
  return LoadProfile(grid, std::vector<double>(grid.slot_count(), value), units);
}

double LoadProfile::at(int slot) const {
  if (slot < 1 || slot > size()) throw DomainError("slot " + std::to_string(slot) + " out of range");
  return values_[slot - 1];
}

LoadProfile LoadProfile::slice(int first_slot, int count) const {
  if (first_slot < 1 || count < 1 || first_slot + count - 1 > size())
    throw DomainError("slice out of range");
  std::vector<double> v(values_.begin() + (first_slot - 1), values_.begin() + (first_slot - 1 + count));
  return LoadProfile(TimeGrid(count, grid_.slot_duration_hours()), std::move(v), units_);
}

LoadProfile LoadProfile::scaled(double factor) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= factor;
  return LoadProfile(grid_, std::move(v), units_);
}

void validate_ev(const EvSpec& ev, const TimeGrid& grid) {
  const int T = grid.slot_count();
  if (ev.arrival < 1 || ev.departure > T || ev.arrival > ev.departure)
    throw DomainError("EV " + std::to_string(ev.id) + ": need 1 <= arrival <= departure <= " +
                      std::to_string(T));
  if (ev.duration < 1) throw DomainError("EV " + std::to_string(ev.id) + ": duration must be >= 1");
  if (ev.departure - ev.arrival + 1 < ev.duration)
    throw FeasibilityError("EV " + std::to_string(ev.id) + ": window [" + std::to_string(ev.arrival) +
                           "," + std::to_string(ev.departure) + "] shorter than duration " +
                           std::to_string(ev.duration));
}

FleetSpec::FleetSpec(TimeGrid grid, std::vector<EvSpec> evs, double charging_power_kw)
    : grid_(grid), evs_(std::move(evs)), charging_power_kw_(charging_power_kw) {
  if (evs_.empty()) throw DomainError("fleet must contain at least one EV");
  if (!(charging_power_kw_ > 0.0)) throw DomainError("charging power must be positive");
  for (std::size_t i = 0; i < evs_.size(); ++i) {
    if (evs_[i].id != static_cast<int>(i) + 1)
      throw ValidationError("EV ids must be contiguous 1..I in order; found id " +
                            std::to_string(evs_[i].id) + " at position " + std::to_string(i + 1));
    validate_ev(evs_[i], grid_);
  }
}

FleetSpec FleetSpec::with_power(double charging_power_kw) const {
  return FleetSpec(grid_, evs_, charging_power_kw);
}

std::string to_string(const ScheduleVector& s) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
  out << ')';
  return out.str();
}

std::vector<int> action_set(const EvSpec& ev) {
  if (ev.duration < 1 || ev.departure - ev.arrival + 1 < ev.duration)
    throw FeasibilityError("EV " + std::to_string(ev.id) + " has an empty action set");
  std::vector<int> starts;
  for (int s = ev.arrival; s <= ev.departure - ev.duration + 1; ++s) starts.push_back(s);
  return starts;
}

void validate_schedule(const FleetSpec& fleet, const ScheduleVector& s) {
  if (s.size() != fleet.size())
    throw DimensionError("schedule has " + std::to_string(s.size()) + " starts for " +
                         std::to_string(fleet.size()) + " EVs");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& ev = fleet.ev(i);
    if (s[i] < ev.arrival || s[i] > ev.departure - ev.duration + 1)
      throw DomainError("EV " + std::to_string(ev.id) + ": start " + std::to_string(s[i]) +
                        " outside its action set");
  }
}

std::vector<int> occupancy(const FleetSpec& fleet, const ScheduleVector& s) {
  validate_schedule(fleet, s);
  std::vector<int> n(fleet.grid().slot_count(), 0);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int t = s[i]; t < s[i] + fleet.ev(i).duration; ++t) ++n[t - 1];
  return n;
}

std::vector<int> start_counts(const FleetSpec& fleet, const ScheduleVector& s) {
  validate_schedule(fleet, s);
  std::vector<int> n(fleet.grid().slot_count(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) ++n[s[i] - 1];
  return n;
}

LoadProfile total_load(const LoadProfile& exo, const FleetSpec& fleet, const ScheduleVector& s) {
  if (!(exo.grid() == fleet.grid())) throw DimensionError("exogenous profile and fleet grids differ");
  const auto n = occupancy(fleet, s);
  std::vector<double> load(exo.values().begin(), exo.values().end());
  for (std::size_t t = 0; t < load.size(); ++t) load[t] += fleet.charging_power_kw() * n[t];
  return LoadProfile(exo.grid(), std::move(load), exo.units());
}

}  // namespace evcs
