// SPDX-License-Identifier: Apache-2.0
#include "evcs/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "evcs/errors.hpp"

namespace evcs {

using nlohmann::json;

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

json json_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return std::stod(format_number(value));
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s == "inf" || s == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (s == "-inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

bool parse_int(const std::string& s, int& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

struct Row {
  int line = 0;
  std::vector<std::string> fields;
};

// Non-blank data rows; a first row whose leading field is not numeric is a header.
std::vector<Row> read_rows(std::istream& in, std::size_t expected_fields) {
  std::vector<Row> rows;
  std::string line;
  int number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    double probe = 0.0;
    if (first && !parse_double(fields.front(), probe)) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != expected_fields)
      throw ParseError("expected " + std::to_string(expected_fields) + " fields, found " +
                           std::to_string(fields.size()),
                       number);
    rows.push_back({number, std::move(fields)});
  }
  if (rows.empty()) throw ParseError("no data rows", 0);
  return rows;
}

int field_int(const Row& row, std::size_t k, const char* name) {
  int v = 0;
  if (!parse_int(row.fields[k], v)) throw ParseError(std::string(name) + " '" + row.fields[k] + "' is not an integer", row.line);
  return v;
}

double field_double(const Row& row, std::size_t k, const char* name) {
  double v = 0.0;
  if (!parse_double(row.fields[k], v)) throw ParseError(std::string(name) + " '" + row.fields[k] + "' is not a number", row.line);
  return v;
}

// Checks that the first column enumerates 1..n in order.
void check_index(const Row& row, int value, int expected, const char* name) {
  if (value == expected) return;
  if (value < expected) throw ParseError("duplicated " + std::string(name) + " " + std::to_string(value), row.line);
  throw ParseError("missing " + std::string(name) + " " + std::to_string(expected) + " (found " +
                       std::to_string(value) + ")",
                   row.line);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return in;
}

}  // namespace

LoadProfile parse_profile_csv(std::istream& in, double slot_hours, Units units) {
  const auto rows = read_rows(in, 2);
  std::vector<double> values;
  for (const auto& row : rows) {
    check_index(row, field_int(row, 0, "slot"), static_cast<int>(values.size()) + 1, "slot");
    values.push_back(field_double(row, 1, "value"));
  }
  const int n = static_cast<int>(values.size());
  return LoadProfile(TimeGrid(n, slot_hours), std::move(values), units);
}

LoadProfile load_profile_csv(const std::string& path, double slot_hours, Units units) {
  auto in = open_input(path);
  return parse_profile_csv(in, slot_hours, units);
}

void write_profile_csv(std::ostream& out, const LoadProfile& profile) {
  out << "slot,value\n";
  for (int t = 1; t <= profile.size(); ++t) out << t << ',' << format_exact(profile.at(t)) << '\n';
}

FleetSpec parse_fleet_csv(std::istream& in, TimeGrid grid, double charging_power_kw) {
  const auto rows = read_rows(in, 4);
  std::vector<EvSpec> evs;
  for (const auto& row : rows) {
    EvSpec ev;
    ev.id = field_int(row, 0, "id");
    check_index(row, ev.id, static_cast<int>(evs.size()) + 1, "id");
    ev.arrival = field_int(row, 1, "arrival");
    ev.departure = field_int(row, 2, "departure");
    ev.duration = field_int(row, 3, "duration");
    evs.push_back(ev);
  }
  return FleetSpec(grid, std::move(evs), charging_power_kw);
}

FleetSpec load_fleet_csv(const std::string& path, TimeGrid grid, double charging_power_kw) {
  auto in = open_input(path);
  return parse_fleet_csv(in, grid, charging_power_kw);
}

void write_fleet_csv(std::ostream& out, const FleetSpec& fleet) {
  out << "id,arrival,departure,duration\n";
  for (const auto& ev : fleet.evs())
    out << ev.id << ',' << ev.arrival << ',' << ev.departure << ',' << ev.duration << '\n';
}

ScheduleVector parse_schedule_csv(std::istream& in) {
  const auto rows = read_rows(in, 2);
  ScheduleVector s;
  for (const auto& row : rows) {
    check_index(row, field_int(row, 0, "ev"), static_cast<int>(s.size()) + 1, "ev");
    s.starts.push_back(field_int(row, 1, "start"));
  }
  return s;
}

void write_schedule_csv(std::ostream& out, const ScheduleVector& s) {
  out << "ev,start\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << i + 1 << ',' << s[i] << '\n';
}

void write_thermal_csv(std::ostream& out, const ThermalTrace& trace) {
  out << "slot,hotspot_c,top_oil_rise_c,aging\n";
  for (std::size_t t = 0; t < trace.hotspot_c.size(); ++t)
    out << t + 1 << ',' << format_number(trace.hotspot_c[t]) << ',' << format_number(trace.top_oil_rise_c[t]) << ','
        << format_number(trace.aging[t]) << '\n';
}

void write_trajectory_csv(std::ostream& out, const BrdResult& result) {
  out << "round,ev,start,payoff,potential\n";
  for (const auto& step : result.steps) {
    out << step.round << ',' << step.ev + 1 << ',' << step.start << ',' << format_number(step.payoff) << ',';
    if (step.potential) out << format_number(*step.potential);
    out << '\n';
  }
}

void write_profiles_csv(std::ostream& out, const ContinuousProfileSet& profiles) {
  out << "slot";
  for (std::size_t i = 0; i < profiles.power_kw.size(); ++i) out << ",ev_" << i + 1;
  out << '\n';
  for (int t = 0; t < profiles.grid.slot_count(); ++t) {
    out << t + 1;
    for (const auto& row : profiles.power_kw) out << ',' << format_number(row[t]);
    out << '\n';
  }
}

void write_equilibria_csv(std::ostream& out, const NeReport& report) {
  out << "index";
  const std::size_t n = report.equilibria.empty() ? 0 : report.equilibria.front().size();
  for (std::size_t i = 0; i < n; ++i) out << ",ev_" << i + 1;
  out << '\n';
  for (std::size_t k = 0; k < report.equilibria.size(); ++k) {
    out << k + 1;
    for (int s : report.equilibria[k].starts) out << ',' << s;
    out << '\n';
  }
}

namespace {

const char* potential_name(PotentialKind kind) {
  return kind == PotentialKind::CommonWindow ? "common_window" : "own_window_memoryless";
}

}  // namespace

json to_json(const BrdResult& result) {
  json j;
  j["schedule"] = result.schedule.starts;
  j["converged"] = result.converged;
  j["rounds_used"] = result.rounds_used;
  j["rounds_to_fixed_point"] = result.rounds_to_fixed_point;
  j["potential"] = result.potential_kind ? json(potential_name(*result.potential_kind)) : json(nullptr);
  json phi = json::array();
  for (double v : result.potential_trajectory) phi.push_back(json_number(v));
  j["potential_trajectory"] = phi;
  json final_payoffs = json::array();
  for (const auto& traj : result.payoff_trajectories) final_payoffs.push_back(json_number(traj.back()));
  j["final_payoffs"] = final_payoffs;
  return j;
}

json to_json(const NeReport& report) {
  json j;
  json eq = json::array();
  for (const auto& s : report.equilibria) eq.push_back(s.starts);
  json opt = json::array();
  for (const auto& s : report.optima) opt.push_back(s.starts);
  j["equilibria"] = eq;
  j["equilibrium_count"] = report.equilibria.size();
  j["optima"] = opt;
  j["best_sum_payoff"] = json_number(report.best_sum_payoff);
  j["worst_ne_sum_payoff"] = json_number(report.worst_ne_sum_payoff);
  j["pod"] = json_number(report.pod);
  j["search_space_size"] = report.search_space_size;
  return j;
}

json to_json(const ExperimentReport& report) {
  json j;
  j["scenario"] = report.scenario;
  j["sweep"] = report.sweep_names;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    json sweep = json::object();
    for (const auto& [name, value] : row.sweep) sweep[name] = json_number(value);
    r["sweep"] = sweep;
    r["policy"] = row.policy;
    r["metric"] = row.metric;
    r["replicates"] = row.replicates;
    r["feasible"] = row.feasible;
    r["mean"] = json_number(row.value.mean);
    r["median"] = json_number(row.value.median);
    r["ci68"] = {json_number(row.value.lo68), json_number(row.value.hi68)};
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "scenario";
  for (const auto& name : report.sweep_names) out << ',' << name;
  out << ",policy,metric,replicates,feasible,mean,median,ci68_lo,ci68_hi\n";
  for (const auto& row : report.rows) {
    out << report.scenario;
    for (const auto& name : report.sweep_names) {
      out << ',';
      for (const auto& [key, value] : row.sweep)
        if (key == name) out << format_number(value);
    }
    out << ',' << row.policy << ',' << row.metric << ',' << row.replicates << ',' << (row.feasible ? 1 : 0) << ','
        << format_number(row.value.mean) << ',' << format_number(row.value.median) << ','
        << format_number(row.value.lo68) << ',' << format_number(row.value.hi68) << '\n';
  }
}

std::map<std::string, std::string> parse_key_value_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", number);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ParseError("empty key", number);
    kv[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> load_key_value_config(const std::string& path) {
  auto in = open_input(path);
  return parse_key_value_config(in);
}

}  // namespace evcs
