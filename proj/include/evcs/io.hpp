// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "evcs/baselines.hpp"
#include "evcs/brd.hpp"
#include "evcs/equilibrium.hpp"
#include "evcs/experiments.hpp"
#include "evcs/model.hpp"
#include "evcs/thermal.hpp"

namespace evcs {

/// "%.9g" rendering used for every computed floating-point result.
std::string format_number(double value);

/// Shortest representation that parses back to the same double; used for
/// input-data files so that write/read round trips are exact.
std::string format_exact(double value);

/// JSON number rounded to 9 significant digits; non-finite values become
/// the strings "inf", "-inf" and "nan".
nlohmann::json json_number(double value);

/// `slot,value` rows with slots 1..T in order. An optional header line is
/// skipped. ParseError (with line number) on malformed, missing or
/// duplicated slots; ValidationError on negative kW.
LoadProfile parse_profile_csv(std::istream& in, double slot_hours, Units units = Units::Kilowatts);
LoadProfile load_profile_csv(const std::string& path, double slot_hours, Units units = Units::Kilowatts);
void write_profile_csv(std::ostream& out, const LoadProfile& profile);

/// `id,arrival,departure,duration` rows, ids 1..I in order.
FleetSpec parse_fleet_csv(std::istream& in, TimeGrid grid, double charging_power_kw);
FleetSpec load_fleet_csv(const std::string& path, TimeGrid grid, double charging_power_kw);
void write_fleet_csv(std::ostream& out, const FleetSpec& fleet);

/// `ev,start` rows, ev = 1..I in order.
ScheduleVector parse_schedule_csv(std::istream& in);
void write_schedule_csv(std::ostream& out, const ScheduleVector& s);

/// `slot,hotspot_c,top_oil_rise_c,aging`.
void write_thermal_csv(std::ostream& out, const ThermalTrace& trace);

/// `round,ev,start,payoff,potential` (potential empty when none applies).
void write_trajectory_csv(std::ostream& out, const BrdResult& result);

/// `slot,ev_1,...,ev_I` power matrix in kW.
void write_profiles_csv(std::ostream& out, const ContinuousProfileSet& profiles);

/// `index,ev_1,...,ev_I` starts of each equilibrium.
void write_equilibria_csv(std::ostream& out, const NeReport& report);

nlohmann::json to_json(const BrdResult& result);
nlohmann::json to_json(const NeReport& report);
nlohmann::json to_json(const ExperimentReport& report);

/// One row per report row: scenario, sweep coordinates, policy, metric,
/// replicates, feasible, mean, median, ci68_lo, ci68_hi.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

/// Flat `key = value` lines; `#` starts a comment. ParseError with the line
/// number on lines without '=' or with an empty key.
std::map<std::string, std::string> parse_key_value_config(std::istream& in);
std::map<std::string, std::string> load_key_value_config(const std::string& path);

}  // namespace evcs
