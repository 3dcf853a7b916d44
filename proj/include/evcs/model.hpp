// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

namespace evcs {

/// Slotted time horizon. Slot indices are 1..slot_count at every interface.
class TimeGrid {
 public:
  TimeGrid(int slot_count, double slot_duration_hours);

  int slot_count() const { return slot_count_; }
  double slot_duration_hours() const { return slot_duration_hours_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  int slot_count_;
  double slot_duration_hours_;
};

enum class Units { Kilowatts, Celsius, PricePerKwh, Dimensionless };

const char* units_name(Units units);

/// A time-indexed real sequence on a grid: exogenous demand, ambient
/// temperature and prices all share this shape. Kilowatt profiles must be
/// nonnegative.
class LoadProfile {
 public:
  LoadProfile(TimeGrid grid, std::vector<double> values, Units units = Units::Kilowatts);

  static LoadProfile constant(TimeGrid grid, double value, Units units = Units::Kilowatts);

  const TimeGrid& grid() const { return grid_; }
  Units units() const { return units_; }
  int size() const { return grid_.slot_count(); }
  std::span<const double> values() const { return values_; }

  /// 1-based access.
  double at(int slot) const;

  /// Sub-profile covering slots first..first+count-1 (1-based).
  LoadProfile slice(int first_slot, int count) const;
  LoadProfile scaled(double factor) const;

  bool operator==(const LoadProfile&) const = default;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  Units units_;
};

struct EvSpec {
  int id = 0;
  int arrival = 1;
  int departure = 1;
  int duration = 1;

  bool operator==(const EvSpec&) const = default;
};

/// Throws FeasibilityError when the window cannot host the charging duration,
/// DomainError when indices fall outside 1..T.
void validate_ev(const EvSpec& ev, const TimeGrid& grid);

/// Mobility data for the whole fleet plus the common charging power.
class FleetSpec {
 public:
  FleetSpec(TimeGrid grid, std::vector<EvSpec> evs, double charging_power_kw);

  const TimeGrid& grid() const { return grid_; }
  std::span<const EvSpec> evs() const { return evs_; }
  const EvSpec& ev(std::size_t index) const { return evs_.at(index); }
  std::size_t size() const { return evs_.size(); }
  double charging_power_kw() const { return charging_power_kw_; }

  FleetSpec with_power(double charging_power_kw) const;

 private:
  TimeGrid grid_;
  std::vector<EvSpec> evs_;
  double charging_power_kw_;
};

/// Joint action: starts[i] is the 1-based charging start slot of the i-th EV.
struct ScheduleVector {
  std::vector<int> starts;

  std::size_t size() const { return starts.size(); }
  int operator[](std::size_t i) const { return starts[i]; }
  int& operator[](std::size_t i) { return starts[i]; }

  bool operator==(const ScheduleVector&) const = default;
  auto operator<=>(const ScheduleVector&) const = default;
};

std::string to_string(const ScheduleVector& s);

/// Feasible start slots {a, ..., d - C + 1}.
std::vector<int> action_set(const EvSpec& ev);

/// Throws DimensionError on length mismatch, DomainError when a start is
/// outside the EV's action set.
void validate_schedule(const FleetSpec& fleet, const ScheduleVector& s);

/// n_t: number of EVs charging in slot t (index t-1).
std::vector<int> occupancy(const FleetSpec& fleet, const ScheduleVector& s);

/// ñ_t: number of EVs starting in slot t (index t-1).
std::vector<int> start_counts(const FleetSpec& fleet, const ScheduleVector& s);

/// L_t = L^exo_t + P n_t.
LoadProfile total_load(const LoadProfile& exo, const FleetSpec& fleet, const ScheduleVector& s);

}  // namespace evcs
