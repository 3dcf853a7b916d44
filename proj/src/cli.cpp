// SPDX-License-Identifier: Apache-2.0
#include "evcs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "evcs/errors.hpp"
#include "evcs/io.hpp"

namespace evcs {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  // shared
  std::string config;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string seed;
  int jobs = 1;
  bool strict = false;
  double slot_hours = 0.5;

  // game inputs
  std::string exo, fleet, ambient, prices;
  double ambient_c = 20.0;
  double power = 3.0;
  double rated = 90.0;
  double time_constant = 2.5;
  double initial_hotspot = 98.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::string window = "own";
  std::string inertia = "with";
  std::string ev_cost = "zero";

  // brd
  std::string order = "round-robin";
  std::string initial = "arrival";
  double tolerance = 0.0;
  int max_rounds = 100;

  // baseline
  std::string policy = "PaC";
  double max_power = 0.0;
  double penalty = 0.5;
  int max_iters = 2000;

  // enumerate
  double budget = 1e8;

  // experiment / calibrate
  std::string study;
  int days = 30;
  int replicates = 200;
  std::string world_seed = "2012";
  std::string exo_days, ambient_days;
  std::string fleet_sizes, fsnr, powers, alphas, time_constants, policies;
  std::string mobility;
  double sigma = 26.0;
  double energy = 24.0;
  int day = 0;
  bool per_day_offset = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    if (item == "inf" || item == "+inf") {
      out.push_back(kNoNoise);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles(s, what)) {
    if (v != std::floor(v) || !std::isfinite(v)) throw ConfigError(std::string("bad ") + what + " entry");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::uint64_t parse_seed(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + " must be a nonnegative integer, got '" + s + "'");
  }
}

std::uint64_t resolve_seed(const Options& o) {
  if (!o.seed.empty()) return parse_seed(o.seed, "seed");
  if (const char* env = std::getenv("EVCS_SEED"); env && *env) return parse_seed(env, "EVCS_SEED");
  return 0;
}

TransformerParams transformer(const Options& o) {
  TransformerParams p;
  p.rated_power_kw = o.rated;
  p.thermal_time_constant_hours = o.time_constant;
  p.initial_hotspot_c = o.initial_hotspot;
  return p;
}

CostConfig cost_config(const Options& o, int slot_count) {
  CostConfig c;
  c.alpha = o.alpha;
  c.beta = o.beta;
  c.window_mode = o.window == "common" ? WindowMode::Common : WindowMode::Own;
  c.inertia_mode = o.inertia == "memoryless" ? InertiaMode::Memoryless : InertiaMode::WithInertia;
  c.ev_cost_mode = o.ev_cost == "price" ? EvCostMode::PriceSum : EvCostMode::Zero;
  if (!o.prices.empty()) {
    const auto prices = load_profile_csv(o.prices, o.slot_hours, Units::PricePerKwh);
    if (prices.size() != slot_count) throw DimensionError("price profile length differs from the demand profile");
    c.prices = {std::vector<double>(prices.values().begin(), prices.values().end())};
  }
  return c;
}

GameContext game_context(const Options& o) {
  if (o.exo.empty()) throw ConfigError("--exo is required");
  if (o.fleet.empty()) throw ConfigError("--fleet is required");
  const auto exo = load_profile_csv(o.exo, o.slot_hours);
  const auto ambient = o.ambient.empty() ? LoadProfile::constant(exo.grid(), o.ambient_c, Units::Celsius)
                                         : load_profile_csv(o.ambient, o.slot_hours, Units::Celsius);
  if (!(ambient.grid() == exo.grid())) throw DimensionError("ambient and demand profiles differ in length");
  GameContext ctx{exo, ambient, load_fleet_csv(o.fleet, exo.grid(), o.power), transformer(o),
                  cost_config(o, exo.size()), {}};
  ctx.validate();
  return ctx;
}

void write_file(const Options& o, const std::string& name, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(o.out_dir);
  const auto path = fs::path(o.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  body(f);
  if (!f) throw ValidationError("write failed for '" + path.string() + "'");
}

void write_json(const Options& o, const std::string& name, const json& j) {
  write_file(o, name, [&](std::ostream& f) { f << j.dump(2) << '\n'; });
}

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

json thermal_summary(const ThermalTrace& trace) {
  json j;
  j["peak_hotspot_c"] = json_number(*std::max_element(trace.hotspot_c.begin(), trace.hotspot_c.end()));
  j["aging_sum"] = json_number(sum_of(trace.aging));
  j["lifetime_years"] = json_number(lifetime_years(trace.aging));
  j["saturated_slots"] = trace.saturated_slots;
  return j;
}

json settings(const Options& o) {
  return {{"alpha", json_number(o.alpha)}, {"beta", json_number(o.beta)}, {"window", o.window},
          {"inertia", o.inertia}, {"ev_cost", o.ev_cost}, {"power_kw", json_number(o.power)}};
}

json thermal_arrays(const ThermalTrace& trace) {
  json j;
  json hs = json::array(), oil = json::array(), aging = json::array();
  for (std::size_t t = 0; t < trace.hotspot_c.size(); ++t) {
    hs.push_back(json_number(trace.hotspot_c[t]));
    oil.push_back(json_number(trace.top_oil_rise_c[t]));
    aging.push_back(json_number(trace.aging[t]));
  }
  j["hotspot_c"] = hs;
  j["top_oil_rise_c"] = oil;
  j["aging"] = aging;
  return j;
}

double peak(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

int cmd_schedule(const Options& o, std::ostream& out) {
  const auto ctx = game_context(o);
  BrdConfig cfg;
  cfg.tolerance = o.tolerance;
  cfg.max_rounds = o.max_rounds;
  cfg.seed = resolve_seed(o);
  cfg.order = o.order == "start-time" ? UpdateOrder::StartTimeAscending : UpdateOrder::FixedRoundRobin;
  cfg.initial = o.initial == "random" ? InitialSchedule::Random : InitialSchedule::Arrival;
  const auto result = run_brd(ctx, cfg);
  const auto load = total_load(ctx.exo, ctx.fleet, result.schedule);
  const auto trace = game_thermal_trace(load, ctx);

  json summary;
  summary["command"] = "schedule";
  summary["seed"] = cfg.seed;
  summary["settings"] = settings(o);
  summary["brd"] = to_json(result);
  summary["sum_payoff"] = json_number(sum_payoff(result.schedule, ctx));
  summary["peak_load_kw"] = json_number(peak(load.values()));
  summary["thermal"] = thermal_summary(trace);

  if (o.format == "json") {
    json full = summary;
    json steps = json::array();
    for (const auto& s : result.steps)
      steps.push_back({{"round", s.round}, {"ev", s.ev + 1}, {"start", s.start}, {"payoff", json_number(s.payoff)},
                       {"potential", s.potential ? json_number(*s.potential) : json(nullptr)}});
    full["trajectory"] = steps;
    full["thermal_trace"] = thermal_arrays(trace);
    write_json(o, "result.json", full);
  } else {
    write_file(o, "schedule.csv", [&](std::ostream& f) { write_schedule_csv(f, result.schedule); });
    write_file(o, "trajectory.csv", [&](std::ostream& f) { write_trajectory_csv(f, result); });
    write_file(o, "thermal.csv", [&](std::ostream& f) { write_thermal_csv(f, trace); });
    write_json(o, "summary.json", summary);
  }
  out << summary.dump(2) << '\n';
  return o.strict && !result.converged ? kExitNotConverged : kExitOk;
}

int cmd_baseline(const Options& o, std::ostream& out) {
  const auto ctx = game_context(o);
  const Policy policy = parse_policy(o.policy);
  ContinuousProfileSet profiles{ctx.fleet.grid(), {}, true, 0};
  switch (policy) {
    case Policy::PlugAndCharge:
      profiles = rectangular_profiles(ctx.fleet, plug_and_charge(ctx.fleet));
      break;
    case Policy::GanStyle: {
      GanOptions g;
      g.penalty_weight = o.penalty;
      g.max_iters = o.max_iters;
      g.max_power_kw = o.max_power;
      profiles = gan_style_schedule(ctx.fleet, ctx.exo, g);
      break;
    }
    case Policy::ShinwariStyle:
      profiles = shinwari_style_schedule(ctx.fleet, ctx.exo, o.max_power);
      break;
    default:
      throw ConfigError("baseline policy must be PaC, GanStyle or ShinwariStyle");
  }
  std::vector<double> load(ctx.exo.values().begin(), ctx.exo.values().end());
  const auto agg = profiles.aggregate();
  for (std::size_t t = 0; t < load.size(); ++t) load[t] += agg[t];
  const auto trace = ctx.config.inertia_mode == InertiaMode::Memoryless
                         ? hotspot_memoryless(load, ctx.ambient.values(), ctx.params)
                         : hotspot_with_inertia(load, ctx.ambient.values(), o.slot_hours, ctx.params);
  double losses = 0.0;
  for (double l : load) losses += joule_losses(l, ctx.config);

  json summary;
  summary["command"] = "baseline";
  summary["policy"] = policy_name(policy);
  summary["settings"] = settings(o);
  summary["converged"] = profiles.converged;
  summary["iterations"] = profiles.iterations;
  summary["peak_load_kw"] = json_number(peak(load));
  summary["losses"] = json_number(losses);
  summary["thermal"] = thermal_summary(trace);

  if (o.format == "json") {
    json full = summary;
    json rows = json::array();
    for (const auto& row : profiles.power_kw) {
      json r = json::array();
      for (double v : row) r.push_back(json_number(v));
      rows.push_back(r);
    }
    full["profiles_kw"] = rows;
    full["thermal_trace"] = thermal_arrays(trace);
    write_json(o, "result.json", full);
  } else {
    write_file(o, "profiles.csv", [&](std::ostream& f) { write_profiles_csv(f, profiles); });
    write_file(o, "thermal.csv", [&](std::ostream& f) { write_thermal_csv(f, trace); });
    write_json(o, "summary.json", summary);
  }
  out << summary.dump(2) << '\n';
  return o.strict && !profiles.converged ? kExitNotConverged : kExitOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const auto ctx = game_context(o);
  if (!(o.budget >= 1.0)) throw ConfigError("budget must be >= 1");
  const auto report = enumerate_equilibria(ctx, static_cast<std::uint64_t>(o.budget), o.jobs);
  json summary = to_json(report);
  summary["command"] = "enumerate";
  if (o.format == "json") {
    write_json(o, "result.json", summary);
  } else {
    write_file(o, "equilibria.csv", [&](std::ostream& f) { write_equilibria_csv(f, report); });
    write_json(o, "summary.json", summary);
  }
  out << summary.dump(2) << '\n';
  return kExitOk;
}

World experiment_world(const Options& o) {
  SyntheticWorldConfig wc;
  wc.days = o.days;
  wc.slot_hours = o.slot_hours;
  wc.seed = parse_seed(o.world_seed, "world seed");
  const auto params = transformer(o);
  if (o.exo_days.empty()) return make_world(wc, params);
  if (o.ambient_days.empty()) throw ConfigError("--exo-days needs --ambient-days");
  const auto exo = load_profile_csv(o.exo_days, o.slot_hours);
  const auto ambient = load_profile_csv(o.ambient_days, o.slot_hours, Units::Celsius);
  if (exo.size() % wc.slots_per_day != 0)
    throw DimensionError("--exo-days must hold whole days of " + std::to_string(wc.slots_per_day) + " slots");
  wc.days = exo.size() / wc.slots_per_day;
  std::vector<double> prices;
  if (!o.prices.empty()) {
    const auto p = load_profile_csv(o.prices, o.slot_hours, Units::PricePerKwh);
    prices.assign(p.values().begin(), p.values().end());
  } else {
    prices = make_world(SyntheticWorldConfig{.days = 1}, params).window_prices;
  }
  return make_world_from_data(wc, exo.values(), ambient.values(), std::move(prices), params, true);
}

void apply_overrides(const Options& o, const CLI::App& sub, SimulationSetup& setup) {
  auto given = [&](const char* name) {
    const auto* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--alpha")) setup.cost.alpha = o.alpha;
  if (given("--window")) setup.cost.window_mode = o.window == "common" ? WindowMode::Common : WindowMode::Own;
  if (given("--inertia"))
    setup.cost.inertia_mode = o.inertia == "memoryless" ? InertiaMode::Memoryless : InertiaMode::WithInertia;
  if (given("--power")) setup.fleet.charging_power_kw = o.power;
  if (given("--mobility"))
    setup.fleet.kind = o.mobility == "survey" ? MobilityScenario::Survey : MobilityScenario::Symmetric;
  if (given("--max-rounds")) setup.brd.max_rounds = o.max_rounds;
  if (given("--order"))
    setup.brd.order = o.order == "start-time" ? UpdateOrder::StartTimeAscending : UpdateOrder::FixedRoundRobin;
  if (given("--penalty")) setup.gan.penalty_weight = o.penalty;
  setup.noise.per_slot_iid = !o.per_day_offset;
}

int cmd_experiment(const Options& o, const CLI::App& sub, std::ostream& out) {
  const World world = experiment_world(o);
  StudyOptions so;
  so.replicates = o.replicates;
  so.seed = resolve_seed(o);
  so.jobs = o.jobs;
  if (so.replicates < 1) throw ConfigError("replicates must be >= 1");
  auto given = [&](const char* name) { return sub.count(name) > 0; };

  ExperimentReport report;
  if (o.study == "convergence") {
    ConvergenceStudy st;
    if (given("--fleet-sizes")) st.fleet_sizes = parse_ints(o.fleet_sizes, "fleet size");
    st.sigma_kw = o.sigma;
    SimulationSetup setup;
    setup.cost = st.cost;
    setup.fleet = st.fleet;
    setup.brd = st.brd;
    apply_overrides(o, sub, setup);
    st.cost = setup.cost;
    st.fleet = setup.fleet;
    st.brd = setup.brd;
    st.brd.seed = so.seed;
    report = convergence_probability_sweep(world, st, so);
  } else if (o.study == "lifetime") {
    LifetimeStudy st;
    if (given("--fleet-sizes")) st.fleet_sizes = parse_ints(o.fleet_sizes, "fleet size");
    if (given("--fsnr")) st.fsnr_db = parse_doubles(o.fsnr, "FSNR");
    if (given("--policies")) {
      st.policies.clear();
      for (const auto& name : split_list(o.policies)) st.policies.push_back(parse_policy(name));
    }
    apply_overrides(o, sub, st.setup);
    report = lifetime_vs_fleet(world, st, so);
  } else if (o.study == "power") {
    PowerStudy st;
    if (given("--fleet-sizes")) st.fleet_sizes = parse_ints(o.fleet_sizes, "fleet size");
    if (given("--fsnr")) st.fsnr_db = parse_doubles(o.fsnr, "FSNR");
    if (given("--powers")) st.power_grid_kw = parse_doubles(o.powers, "power");
    st.energy_need_kwh = o.energy;
    apply_overrides(o, sub, st.setup);
    report = optimal_power_search(world, st, so);
  } else if (o.study == "pareto") {
    ParetoStudy st;
    if (given("--alphas")) st.alpha_grid = parse_doubles(o.alphas, "alpha");
    if (given("--time-constants")) st.time_constants_hours = parse_doubles(o.time_constants, "time constant");
    if (given("--fleet-sizes")) {
      const auto sizes = parse_ints(o.fleet_sizes, "fleet size");
      if (sizes.size() != 1) throw ConfigError("the pareto study takes a single fleet size");
      st.setup.fleet_size = sizes.front();
    }
    st.day = o.day;
    apply_overrides(o, sub, st.setup);
    st.setup.brd.seed = so.seed;
    report = pareto_frontier(world, st);
  } else if (o.study == "money") {
    MoneyStudy st;
    if (given("--fleet-sizes")) st.fleet_sizes = parse_ints(o.fleet_sizes, "fleet size");
    apply_overrides(o, sub, st.setup);
    report = monetary_cost_comparison(world, st, so);
  } else {
    throw ConfigError("unknown study '" + o.study + "'");
  }

  const json j = to_json(report);
  if (o.format == "json") {
    write_json(o, "report.json", j);
    out << j.dump(2) << '\n';
  } else {
    std::ostringstream csv;
    write_report_csv(csv, report);
    write_file(o, "report.csv", [&](std::ostream& f) { f << csv.str(); });
    out << csv.str();
  }
  return kExitOk;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  json summary;
  summary["command"] = "calibrate";
  if (o.exo.empty()) {
    const World world = experiment_world(o);
    summary["source"] = "synthetic";
    summary["days"] = world.day_count();
    summary["kappa"] = json_number(world.kappa);
    const auto trace = hotspot_with_inertia(world.exo_profile(), world.ambient_profile(), world.params);
    summary["lifetime_years"] = json_number(lifetime_years(trace.aging));
  } else {
    const auto exo = load_profile_csv(o.exo, o.slot_hours);
    const auto ambient = o.ambient.empty() ? LoadProfile::constant(exo.grid(), o.ambient_c, Units::Celsius)
                                           : load_profile_csv(o.ambient, o.slot_hours, Units::Celsius);
    const auto params = transformer(o);
    const double kappa = calibrate_exogenous_scale(exo, ambient, params, 1e4);
    summary["source"] = o.exo;
    summary["kappa"] = json_number(kappa);
    const auto trace = hotspot_with_inertia(exo.scaled(kappa), ambient, params);
    summary["lifetime_years"] = json_number(lifetime_years(trace.aging));
  }
  write_json(o, o.format == "json" ? "result.json" : "calibration.json", summary);
  out << summary.dump(2) << '\n';
  return kExitOk;
}

void add_game_options(CLI::App* sub, Options& o) {
  sub->add_option("--exo", o.exo, "Exogenous demand CSV (slot,value; kW)");
  sub->add_option("--fleet", o.fleet, "Fleet CSV (id,arrival,departure,duration)");
  sub->add_option("--ambient", o.ambient, "Ambient temperature CSV (slot,value; degC)");
  sub->add_option("--ambient-c", o.ambient_c, "Constant ambient temperature when no CSV is given");
  sub->add_option("--prices", o.prices, "Price CSV (slot,value)");
  sub->add_option("--power", o.power, "Charging power P (kW)");
  sub->add_option("--alpha", o.alpha, "Aging weight in [0,1]");
  sub->add_option("--beta", o.beta, "Individual price weight");
  sub->add_option("--window", o.window, "Cost window")->check(CLI::IsMember({"own", "common"}));
  sub->add_option("--inertia", o.inertia, "Thermal model")->check(CLI::IsMember({"with", "memoryless"}));
  sub->add_option("--ev-cost", o.ev_cost, "Individual EV cost")->check(CLI::IsMember({"zero", "price"}));
}

void add_transformer_options(CLI::App* sub, Options& o) {
  sub->add_option("--rated", o.rated, "Transformer rated power (kW)");
  sub->add_option("--t0", o.time_constant, "Top-oil time constant (h)");
  sub->add_option("--theta0", o.initial_hotspot, "Initial hot-spot temperature (degC)");
}

void add_brd_options(CLI::App* sub, Options& o) {
  sub->add_option("--order", o.order, "Update order")->check(CLI::IsMember({"round-robin", "start-time"}));
  sub->add_option("--initial", o.initial, "Initial schedule")->check(CLI::IsMember({"arrival", "random"}));
  sub->add_option("--tolerance", o.tolerance, "Stop when the L-inf start change is <= this");
  sub->add_option("--max-rounds", o.max_rounds, "Maximum BRD rounds");
}

std::vector<std::string> with_config(const std::vector<std::string>& args, const std::set<std::string>& commands) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return args;
  const auto kv = load_key_value_config(path);
  std::vector<std::string> injected;
  for (const auto& [key, value] : kv) {
    if (key == "config") continue;
    if (key == "strict" || key == "per-day-offset") {
      if (value == "true" || value == "1") injected.push_back("--" + key);
      continue;
    }
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  // Subcommand first, then config values, then the command line so that flags win.
  auto it = std::find_if(args.begin(), args.end(), [&](const std::string& a) { return commands.count(a) > 0; });
  if (it == args.end()) return args;
  std::vector<std::string> out{*it};
  out.insert(out.end(), injected.begin(), injected.end());
  for (auto a = args.begin(); a != args.end(); ++a)
    if (a != it) out.push_back(*a);
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Distributed EV charging scheduler and transformer-aging simulator", "evcs"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config, "key=value file; command-line flags take precedence");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", o.seed, "Master seed (falls back to EVCS_SEED, then 0)");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--strict", o.strict, "Exit 3 when an iterative scheme does not converge");
  app.add_option("--slot-hours", o.slot_hours, "Slot duration (h)")->check(CLI::PositiveNumber);

  auto* schedule = app.add_subcommand("schedule", "Run best-response dynamics");
  add_game_options(schedule, o);
  add_transformer_options(schedule, o);
  add_brd_options(schedule, o);

  auto* baseline = app.add_subcommand("baseline", "Run a baseline charging policy");
  add_game_options(baseline, o);
  add_transformer_options(baseline, o);
  baseline->add_option("--policy", o.policy, "PaC, GanStyle or ShinwariStyle")
      ->check(CLI::IsMember({"PaC", "GanStyle", "ShinwariStyle"}));
  baseline->add_option("--max-power", o.max_power, "Per-EV power cap (kW); default P");
  baseline->add_option("--penalty", o.penalty, "Proximal penalty weight");
  baseline->add_option("--max-iters", o.max_iters, "Iteration cap");

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate pure Nash equilibria and the PoD");
  add_game_options(enumerate, o);
  add_transformer_options(enumerate, o);
  enumerate->add_option("--budget", o.budget, "Largest joint schedule space to scan");

  auto* experiment = app.add_subcommand("experiment", "Run a simulation study");
  experiment->add_option("--study", o.study, "Study name")
      ->required()
      ->check(CLI::IsMember({"convergence", "lifetime", "power", "pareto", "money"}));
  add_transformer_options(experiment, o);
  experiment->add_option("--days", o.days, "Synthetic days");
  experiment->add_option("--replicates", o.replicates, "Replicates per sweep point");
  experiment->add_option("--world-seed", o.world_seed, "Seed of the synthetic world");
  experiment->add_option("--exo-days", o.exo_days, "Demand CSV covering whole days");
  experiment->add_option("--ambient-days", o.ambient_days, "Ambient CSV covering whole days");
  experiment->add_option("--prices", o.prices, "Charging-window tariff CSV");
  experiment->add_option("--fleet-sizes", o.fleet_sizes, "Comma-separated fleet sizes");
  experiment->add_option("--fsnr", o.fsnr, "Comma-separated FSNR values in dB (inf allowed)");
  experiment->add_option("--powers", o.powers, "Comma-separated charging powers (kW)");
  experiment->add_option("--alphas", o.alphas, "Comma-separated alpha values");
  experiment->add_option("--time-constants", o.time_constants, "Comma-separated T0 values (h)");
  experiment->add_option("--policies", o.policies, "Comma-separated policies");
  experiment->add_option("--mobility", o.mobility, "Fleet model")->check(CLI::IsMember({"symmetric", "survey"}));
  experiment->add_option("--sigma", o.sigma, "Demand standard deviation for the convergence study (kW)");
  experiment->add_option("--energy", o.energy, "Energy need for the power study (kWh)");
  experiment->add_option("--day", o.day, "Day index for the pareto study");
  experiment->add_option("--alpha", o.alpha, "Aging weight in [0,1]");
  experiment->add_option("--window", o.window, "Cost window")->check(CLI::IsMember({"own", "common"}));
  experiment->add_option("--inertia", o.inertia, "Thermal model")->check(CLI::IsMember({"with", "memoryless"}));
  experiment->add_option("--power", o.power, "Charging power P (kW)");
  experiment->add_option("--max-rounds", o.max_rounds, "Maximum BRD rounds");
  experiment->add_option("--order", o.order, "Update order")->check(CLI::IsMember({"round-robin", "start-time"}));
  experiment->add_option("--penalty", o.penalty, "Proximal penalty weight of the Gan-style baseline");
  experiment->add_flag("--per-day-offset", o.per_day_offset, "One forecast error per day instead of per slot");

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate the exogenous demand scale");
  calibrate->add_option("--exo", o.exo, "Demand CSV; omit to calibrate the synthetic world");
  calibrate->add_option("--ambient", o.ambient, "Ambient CSV");
  calibrate->add_option("--ambient-c", o.ambient_c, "Constant ambient temperature");
  calibrate->add_option("--days", o.days, "Synthetic days");
  calibrate->add_option("--world-seed", o.world_seed, "Seed of the synthetic world");
  add_transformer_options(calibrate, o);

  const std::set<std::string> commands{"schedule", "baseline", "enumerate", "experiment", "calibrate"};
  try {
    auto argv = with_config(args, commands);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "evcs: error[" << e.kind() << "]: " << e.what() << '\n';
    return kExitData;
  }

  try {
    if (schedule->parsed()) return cmd_schedule(o, out);
    if (baseline->parsed()) return cmd_baseline(o, out);
    if (enumerate->parsed()) return cmd_enumerate(o, out);
    if (experiment->parsed()) return cmd_experiment(o, *experiment, out);
    if (calibrate->parsed()) return cmd_calibrate(o, out);
  } catch (const Error& e) {
    err << "evcs: error[" << e.kind() << "]: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "evcs: error[io]: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace evcs
