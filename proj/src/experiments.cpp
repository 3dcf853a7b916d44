// SPDX-License-Identifier: Apache-2.0
#include "evcs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "evcs/errors.hpp"
#include "evcs/parallel.hpp"

namespace evcs {

void ForecastNoiseModel::validate() const {
  if (std::isnan(fsnr_db)) throw ConfigError("FSNR must be a number (use inf for a perfect forecast)");
}

double forecast_noise_sigma(std::span<const double> day_profile, double fsnr_db) {
  if (std::isnan(fsnr_db)) throw ConfigError("FSNR must be a number");
  if (day_profile.empty()) throw DimensionError("FSNR over an empty profile");
  if (std::isinf(fsnr_db) && fsnr_db > 0) return 0.0;
  double mean_square = 0.0;
  for (double v : day_profile) mean_square += v * v;
  mean_square /= static_cast<double>(day_profile.size());
  return std::sqrt(mean_square / std::pow(10.0, fsnr_db / 10.0));
}

LoadProfile apply_forecast_noise(const LoadProfile& exo, double sigma, bool per_slot_iid, Rng& rng) {
  if (!(sigma >= 0.0)) throw DomainError("noise standard deviation must be nonnegative");
  if (sigma == 0.0) return exo;
  std::normal_distribution<double> z(0.0, sigma);
  std::vector<double> out(exo.values().begin(), exo.values().end());
  const double offset = per_slot_iid ? 0.0 : z(rng);
  for (double& v : out) v = std::max(0.0, v + (per_slot_iid ? z(rng) : offset));
  return LoadProfile(exo.grid(), std::move(out), exo.units());
}

LoadProfile apply_forecast_noise(const LoadProfile& exo, const ForecastNoiseModel& model) {
  model.validate();
  Rng rng(model.rng_seed);
  return apply_forecast_noise(exo, forecast_noise_sigma(exo.values(), model.fsnr_db), model.per_slot_iid, rng);
}

void SyntheticWorldConfig::validate() const {
  if (days < 1) throw ConfigError("days must be >= 1");
  if (slots_per_day < 1 || window_slots < 1 || window_slots > slots_per_day)
    throw ConfigError("need 1 <= window_slots <= slots_per_day");
  if (!(slot_hours > 0.0)) throw ConfigError("slot duration must be positive");
  if (!(demand_jitter >= 0.0) || !(ambient_jitter_c >= 0.0)) throw ConfigError("jitter must be nonnegative");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double hour_of_slot(const SyntheticWorldConfig& c, int slot0) {
  return std::fmod(c.start_hour + slot0 * c.slot_hours, 24.0);
}

// Gaussian bump on the 24 h circle.
double bump(double hour, double center, double width) {
  double d = std::abs(hour - center);
  d = std::min(d, 24.0 - d);
  return std::exp(-0.5 * (d / width) * (d / width));
}

// +1 in mid-January, -1 in mid-July.
double winter_index(const SyntheticWorldConfig& c, int day) {
  const double day_of_year = (day + 0.5) * 366.0 / c.days;
  return std::cos(kTwoPi * (day_of_year - 15.0) / 366.0);
}

double raw_demand(const SyntheticWorldConfig& c, double hour, double winter) {
  const double base = c.base_demand * (1.0 + 0.5 * c.seasonal_swing * winter);
  const double peaks = c.evening_peak * bump(hour, 19.5, c.evening_width_hours) +
                       c.morning_peak * bump(hour, 8.0, c.morning_width_hours) +
                       c.midday_peak * bump(hour, 13.0, 2.0);
  return base + (1.0 + c.seasonal_swing * winter) * peaks;
}

bool offpeak(const SyntheticWorldConfig& c, double hour) {
  if (c.offpeak_start_hour <= c.offpeak_end_hour) return hour >= c.offpeak_start_hour && hour < c.offpeak_end_hour;
  return hour >= c.offpeak_start_hour || hour < c.offpeak_end_hour;
}

std::vector<double> concat(const std::vector<std::vector<double>>& days) {
  std::vector<double> out;
  for (const auto& d : days) out.insert(out.end(), d.begin(), d.end());
  return out;
}

}  // namespace

LoadProfile World::exo_profile() const {
  return LoadProfile(TimeGrid(day_count() * config.slots_per_day, config.slot_hours), concat(exo_days));
}

LoadProfile World::ambient_profile() const {
  return LoadProfile(TimeGrid(day_count() * config.slots_per_day, config.slot_hours), concat(ambient_days),
                     Units::Celsius);
}

World make_world_from_data(const SyntheticWorldConfig& config, std::span<const double> exo_kw,
                           std::span<const double> ambient_c, std::vector<double> window_prices,
                           const TransformerParams& params, bool calibrate) {
  config.validate();
  params.validate(config.slot_hours, true);
  const auto n = static_cast<std::size_t>(config.days) * config.slots_per_day;
  if (exo_kw.size() != n || ambient_c.size() != n)
    throw DimensionError("world data must hold days * slots_per_day values");
  if (static_cast<int>(window_prices.size()) != config.window_slots)
    throw DimensionError("tariff must cover the charging window");

  World world;
  world.config = config;
  world.params = params;
  world.window_prices = std::move(window_prices);
  const TimeGrid horizon(static_cast<int>(n), config.slot_hours);
  const LoadProfile exo(horizon, std::vector<double>(exo_kw.begin(), exo_kw.end()));
  const LoadProfile ambient(horizon, std::vector<double>(ambient_c.begin(), ambient_c.end()), Units::Celsius);
  world.kappa = calibrate ? calibrate_exogenous_scale(exo, ambient, params, 1e4) : 1.0;
  for (int d = 0; d < config.days; ++d) {
    std::vector<double> e(config.slots_per_day), a(config.slots_per_day);
    for (int t = 0; t < config.slots_per_day; ++t) {
      e[t] = world.kappa * exo_kw[d * config.slots_per_day + t];
      a[t] = ambient_c[d * config.slots_per_day + t];
    }
    world.exo_days.push_back(std::move(e));
    world.ambient_days.push_back(std::move(a));
  }
  return world;
}

World make_world(const SyntheticWorldConfig& config, const TransformerParams& params) {
  config.validate();
  Rng rng(config.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> exo, ambient;
  for (int d = 0; d < config.days; ++d) {
    const double winter = winter_index(config, d);
    for (int t = 0; t < config.slots_per_day; ++t) {
      const double hour = hour_of_slot(config, t);
      exo.push_back(std::max(0.0, raw_demand(config, hour, winter) * (1.0 + config.demand_jitter * unit(rng))));
      ambient.push_back(11.5 - 7.5 * winter + 4.0 * std::cos(kTwoPi * (hour - 15.0) / 24.0) +
                        config.ambient_jitter_c * unit(rng));
    }
  }
  std::vector<double> prices;
  for (int t = 0; t < config.window_slots; ++t)
    prices.push_back(offpeak(config, hour_of_slot(config, t)) ? config.offpeak_price : config.peak_price);
  return make_world_from_data(config, exo, ambient, std::move(prices), params, true);
}

FleetSpec draw_fleet(const FleetScenario& scenario, TimeGrid window, int fleet_size, Rng& rng) {
  if (scenario.kind == MobilityScenario::Symmetric)
    return symmetric_fleet(window, fleet_size, scenario.charging_power_kw, scenario.arrival, scenario.departure,
                           scenario.duration);
  return random_fleet(window, fleet_size, scenario.charging_power_kw, rng, scenario.stats);
}

const char* policy_name(Policy policy) {
  switch (policy) {
    case Policy::NoEV: return "NoEV";
    case Policy::PlugAndCharge: return "PaC";
    case Policy::Brd: return "BRD";
    case Policy::GanStyle: return "GanStyle";
    case Policy::ShinwariStyle: return "ShinwariStyle";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  for (Policy p : {Policy::NoEV, Policy::PlugAndCharge, Policy::Brd, Policy::GanStyle, Policy::ShinwariStyle})
    if (name == policy_name(p)) return p;
  throw ConfigError("unknown policy '" + name + "' (NoEV, PaC, BRD, GanStyle, ShinwariStyle)");
}

SimulationSetup::SimulationSetup() {
  cost.alpha = 1.0;
  cost.window_mode = WindowMode::Own;
  cost.inertia_mode = InertiaMode::WithInertia;
}

namespace {

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double day_losses(std::span<const double> load, const CostConfig& cost) {
  double s = 0.0;
  for (double l : load) s += joule_losses(l, cost);
  return s;
}

ContinuousProfileSet policy_profiles(Policy policy, const FleetSpec& fleet, const LoadProfile& forecast,
                                     const LoadProfile& ambient, const World& world, const SimulationSetup& setup,
                                     std::optional<double> top_oil, PolicyOutcome& outcome, int& rounds) {
  switch (policy) {
    case Policy::NoEV: {
      ContinuousProfileSet none{fleet.grid(), {}, true, 0};
      none.power_kw.assign(fleet.size(), std::vector<double>(fleet.grid().slot_count(), 0.0));
      return none;
    }
    case Policy::PlugAndCharge:
      return rectangular_profiles(fleet, plug_and_charge(fleet));
    case Policy::Brd: {
      const GameContext ctx{forecast, ambient, fleet, world.params, setup.cost, top_oil};
      const auto result = run_brd(ctx, setup.brd);
      outcome.all_converged = outcome.all_converged && result.converged;
      rounds += result.rounds_to_fixed_point;
      return rectangular_profiles(fleet, result.schedule);
    }
    case Policy::GanStyle: {
      auto set = gan_style_schedule(fleet, forecast, setup.gan);
      outcome.all_converged = outcome.all_converged && set.converged;
      return set;
    }
    case Policy::ShinwariStyle:
      return shinwari_style_schedule(fleet, forecast, setup.gan.max_power_kw);
  }
  throw ConfigError("unknown policy");
}

}  // namespace

PolicyOutcome simulate_policy(const World& world, Policy policy, const SimulationSetup& setup,
                              std::uint64_t replicate_seed) {
  setup.noise.validate();
  const auto& cfg = world.config;
  const int first = setup.first_day;
  const int count = setup.day_count > 0 ? setup.day_count : world.day_count() - first;
  if (first < 0 || count < 1 || first + count > world.day_count()) throw ConfigError("day range outside the world");
  if (setup.fleet_size < 1) throw ConfigError("fleet size must be >= 1");
  const auto& prices = setup.cost.prices.empty() ? world.window_prices : setup.cost.prices.front();

  PolicyOutcome outcome;
  double reference_aging = 0.0, reference_losses = 0.0, money = 0.0;
  std::optional<double> state, reference_state;
  int rounds = 0;
  const TimeGrid window = world.window_grid();

  for (int day = first; day < first + count; ++day) {
    const std::uint64_t day_seed = derive_seed(replicate_seed, static_cast<std::uint64_t>(day));
    Rng fleet_rng(derive_seed(day_seed, 0));
    Rng noise_rng(derive_seed(day_seed, 1 + setup.noise.rng_seed));
    const auto& truth = world.exo_days[day];
    const auto& ambient_day = world.ambient_days[day];

    const LoadProfile window_truth(window, std::vector<double>(truth.begin(), truth.begin() + cfg.window_slots));
    const LoadProfile window_ambient(
        window, std::vector<double>(ambient_day.begin(), ambient_day.begin() + cfg.window_slots), Units::Celsius);
    const auto forecast = apply_forecast_noise(window_truth, forecast_noise_sigma(truth, setup.noise.fsnr_db),
                                               setup.noise.per_slot_iid, noise_rng);

    const FleetSpec fleet = draw_fleet(setup.fleet, window, setup.fleet_size, fleet_rng);
    const auto profiles =
        policy_profiles(policy, fleet, forecast, window_ambient, world, setup, state, outcome, rounds);

    std::vector<double> load = truth;
    const auto ev_load = profiles.aggregate();
    for (int t = 0; t < cfg.window_slots; ++t) load[t] += ev_load[t];
    const auto trace = hotspot_with_inertia(load, ambient_day, cfg.slot_hours, world.params, state);
    state = trace.final_top_oil_rise();
    outcome.aging_sum += sum_of(trace.aging);
    outcome.losses += day_losses(load, setup.cost);

    const auto reference = hotspot_with_inertia(truth, ambient_day, cfg.slot_hours, world.params, reference_state);
    reference_state = reference.final_top_oil_rise();
    reference_aging += sum_of(reference.aging);
    reference_losses += day_losses(truth, setup.cost);

    if (policy != Policy::NoEV) {
      double day_money = 0.0;
      for (const auto& row : profiles.power_kw)
        for (int t = 0; t < cfg.window_slots; ++t) day_money += prices[t] * row[t] / fleet.charging_power_kw();
      money += day_money / static_cast<double>(fleet.size());
    }
  }

  outcome.days = count;
  const double slots = static_cast<double>(count) * cfg.slots_per_day;
  outcome.lifetime_years = 40.0 * slots / outcome.aging_sum;
  outcome.normalized_aging = outcome.aging_sum / reference_aging;
  outcome.normalized_losses = outcome.losses / reference_losses;
  outcome.monetary_cost = money / count;
  outcome.brd_rounds = policy == Policy::Brd ? static_cast<double>(rounds) / count : 0.0;
  return outcome;
}

Summary Summary::of(std::vector<double> samples) {
  if (samples.empty()) return {};
  std::sort(samples.begin(), samples.end());
  // Linear interpolation between order statistics.
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(samples.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, samples.size() - 1);
    return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
  };
  Summary s;
  s.mean = sum_of(samples) / static_cast<double>(samples.size());
  s.median = quantile(0.5);
  s.lo68 = quantile(0.16);
  s.hi68 = quantile(0.84);
  return s;
}

const ReportRow* ExperimentReport::find(const std::string& policy, const std::string& metric,
                                        const std::vector<std::pair<std::string, double>>& sweep) const {
  for (const auto& row : rows) {
    if (row.policy != policy || row.metric != metric) continue;
    bool match = true;
    for (const auto& [name, value] : sweep) {
      auto it = std::find_if(row.sweep.begin(), row.sweep.end(), [&](const auto& kv) { return kv.first == name; });
      match = match && it != row.sweep.end() && it->second == value;
    }
    if (match) return &row;
  }
  return nullptr;
}

namespace {

ReportRow make_row(std::vector<std::pair<std::string, double>> sweep, std::string policy, std::string metric,
                   std::vector<double> samples) {
  ReportRow row;
  row.sweep = std::move(sweep);
  row.policy = std::move(policy);
  row.metric = std::move(metric);
  row.replicates = static_cast<int>(samples.size());
  row.value = Summary::of(std::move(samples));
  return row;
}

std::vector<double> mean_window(const std::vector<std::vector<double>>& days, int window_slots) {
  std::vector<double> mean(window_slots, 0.0);
  for (const auto& d : days)
    for (int t = 0; t < window_slots; ++t) mean[t] += d[t] / static_cast<double>(days.size());
  return mean;
}

}  // namespace

ExperimentReport convergence_probability_sweep(const World& world, const ConvergenceStudy& study,
                                               const StudyOptions& options) {
  if (!(study.sigma_kw >= 0.0)) throw ConfigError("sigma must be nonnegative");
  const TimeGrid window = world.window_grid();
  const auto mean_exo = mean_window(world.exo_days, world.config.window_slots);
  const LoadProfile ambient(window, mean_window(world.ambient_days, world.config.window_slots), Units::Celsius);

  ExperimentReport report{"convergence", {"fleet_size"}, {}};
  for (int I : study.fleet_sizes) {
    std::vector<double> converged(options.replicates), rounds(options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
      Rng rng(derive_seed(derive_seed(options.seed, static_cast<std::uint64_t>(I)), r));
      std::normal_distribution<double> z(0.0, study.sigma_kw);
      std::vector<double> exo(mean_exo.size());
      for (std::size_t t = 0; t < exo.size(); ++t) exo[t] = std::max(0.0, mean_exo[t] + z(rng));
      const FleetSpec fleet = draw_fleet(study.fleet, window, I, rng);
      const GameContext ctx{LoadProfile(window, exo), ambient, fleet, world.params, study.cost, {}};
      BrdConfig brd = study.brd;
      brd.seed = derive_seed(brd.seed, r);
      const auto result = run_brd(ctx, brd);
      converged[r] = result.converged ? 1.0 : 0.0;
      rounds[r] = result.rounds_to_fixed_point;
    });
    report.rows.push_back(make_row({{"fleet_size", I}}, "BRD", "convergence_probability", converged));
    report.rows.push_back(make_row({{"fleet_size", I}}, "BRD", "rounds_to_fixed_point", rounds));
  }
  return report;
}

LifetimeStudy::LifetimeStudy() { setup.fleet.kind = MobilityScenario::Survey; }

ExperimentReport lifetime_vs_fleet(const World& world, const LifetimeStudy& study, const StudyOptions& options) {
  ExperimentReport report{"lifetime", {"fsnr_db", "fleet_size"}, {}};
  const auto n_pol = study.policies.size();
  for (double fsnr : study.fsnr_db) {
    for (int I : study.fleet_sizes) {
      SimulationSetup setup = study.setup;
      setup.fleet_size = I;
      setup.noise.fsnr_db = fsnr;
      std::vector<PolicyOutcome> out(options.replicates * n_pol);
      parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        const auto seed = derive_seed(options.seed, r);
        for (std::size_t p = 0; p < n_pol; ++p) out[r * n_pol + p] = simulate_policy(world, study.policies[p], setup, seed);
      });
      for (std::size_t p = 0; p < n_pol; ++p) {
        std::vector<double> life, losses, aging, conv;
        for (int r = 0; r < options.replicates; ++r) {
          const auto& o = out[r * n_pol + p];
          life.push_back(o.lifetime_years);
          losses.push_back(o.normalized_losses);
          aging.push_back(o.normalized_aging);
          conv.push_back(o.all_converged ? 1.0 : 0.0);
        }
        const std::vector<std::pair<std::string, double>> sweep{{"fsnr_db", fsnr}, {"fleet_size", I}};
        const std::string name = policy_name(study.policies[p]);
        report.rows.push_back(make_row(sweep, name, "lifetime_years", life));
        report.rows.push_back(make_row(sweep, name, "normalized_losses", losses));
        report.rows.push_back(make_row(sweep, name, "normalized_aging", aging));
        report.rows.push_back(make_row(sweep, name, "converged_fraction", conv));
      }
    }
  }
  return report;
}

int duration_for_power(double energy_kwh, double power_kw, double slot_hours) {
  return static_cast<int>(std::ceil(energy_kwh / (power_kw * slot_hours) - 1e-9));
}

ExperimentReport optimal_power_search(const World& world, const PowerStudy& study, const StudyOptions& options) {
  if (study.power_grid_kw.empty()) throw ConfigError("empty power grid");
  if (!(study.energy_need_kwh > 0.0)) throw ConfigError("energy need must be positive");
  ExperimentReport report{"optimal_power", {"fsnr_db", "fleet_size", "power_kw"}, {}};
  for (double fsnr : study.fsnr_db) {
    for (int I : study.fleet_sizes) {
      double best_power = 0.0, best_life = -1.0;
      for (double p : study.power_grid_kw) {
        if (!(p > 0.0)) throw ConfigError("grid powers must be positive");
        const std::vector<std::pair<std::string, double>> sweep{{"fsnr_db", fsnr}, {"fleet_size", I}, {"power_kw", p}};
        SimulationSetup setup = study.setup;
        setup.fleet_size = I;
        setup.noise.fsnr_db = fsnr;
        setup.fleet.charging_power_kw = p;
        const int C = duration_for_power(study.energy_need_kwh, p, world.config.slot_hours);
        setup.fleet.duration = C;
        setup.fleet.stats.duration_mean = C;
        setup.fleet.stats.duration_sd = 0.0;
        const bool feasible = setup.fleet.kind == MobilityScenario::Symmetric
                                  ? C <= setup.fleet.departure - setup.fleet.arrival + 1
                                  : C <= world.config.window_slots;
        if (!feasible) {
          ReportRow row = make_row(sweep, "BRD", "lifetime_years", {});
          row.feasible = false;
          report.rows.push_back(row);
          continue;
        }
        std::vector<double> life(options.replicates);
        parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
          life[r] = simulate_policy(world, Policy::Brd, setup, derive_seed(options.seed, r)).lifetime_years;
        });
        auto row = make_row(sweep, "BRD", "lifetime_years", life);
        if (row.value.median > best_life) {
          best_life = row.value.median;
          best_power = p;
        }
        report.rows.push_back(std::move(row));
      }
      report.rows.push_back(make_row({{"fsnr_db", fsnr}, {"fleet_size", I}}, "BRD", "optimal_power_kw", {best_power}));
    }
  }
  return report;
}

ParetoStudy::ParetoStudy() { setup.fleet.kind = MobilityScenario::Survey; }

ExperimentReport pareto_frontier(const World& world, const ParetoStudy& study) {
  ExperimentReport report{"pareto", {"time_constant_hours", "alpha"}, {}};
  for (double tau : study.time_constants_hours) {
    World w = world;
    w.params.thermal_time_constant_hours = tau;
    for (double alpha : study.alpha_grid) {
      SimulationSetup setup = study.setup;
      setup.cost.alpha = alpha;
      setup.first_day = study.day;
      setup.day_count = 1;
      const auto o = simulate_policy(w, Policy::Brd, setup, setup.brd.seed);
      const std::vector<std::pair<std::string, double>> sweep{{"time_constant_hours", tau}, {"alpha", alpha}};
      report.rows.push_back(make_row(sweep, "BRD", "normalized_aging", {o.normalized_aging}));
      report.rows.push_back(make_row(sweep, "BRD", "normalized_losses", {o.normalized_losses}));
    }
  }
  return report;
}

const char* objective_name(MoneyObjective objective) {
  switch (objective) {
    case MoneyObjective::MoneyOnly: return "MoneyOnly";
    case MoneyObjective::AgingOnly: return "AgingOnly";
    case MoneyObjective::LossesOnly: return "LossesOnly";
  }
  return "?";
}

ExperimentReport monetary_cost_comparison(const World& world, const MoneyStudy& study, const StudyOptions& options) {
  const auto& prices = study.prices.empty() ? world.window_prices : study.prices;
  if (prices.empty()) throw ConfigError("monetary cost comparison needs a price profile");
  if (static_cast<int>(prices.size()) != world.config.window_slots)
    throw DimensionError("price profile must cover the charging window");
  ExperimentReport report{"monetary_cost", {"fleet_size"}, {}};
  for (int I : study.fleet_sizes) {
    for (auto objective : {MoneyObjective::MoneyOnly, MoneyObjective::AgingOnly, MoneyObjective::LossesOnly}) {
      SimulationSetup setup = study.setup;
      setup.fleet_size = I;
      setup.cost.prices = {prices};
      switch (objective) {
        case MoneyObjective::MoneyOnly:
          setup.cost.include_dn_cost = false;
          setup.cost.ev_cost_mode = EvCostMode::PriceSum;
          setup.cost.beta = 1.0;
          break;
        case MoneyObjective::AgingOnly:
          setup.cost.alpha = 1.0;
          setup.cost.ev_cost_mode = EvCostMode::Zero;
          break;
        case MoneyObjective::LossesOnly:
          setup.cost.alpha = 0.0;
          setup.cost.ev_cost_mode = EvCostMode::Zero;
          break;
      }
      std::vector<double> cost(options.replicates);
      parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        cost[r] = simulate_policy(world, Policy::Brd, setup, derive_seed(options.seed, r)).monetary_cost;
      });
      report.rows.push_back(make_row({{"fleet_size", I}}, objective_name(objective), "monetary_cost", cost));
    }
  }
  return report;
}

}  // namespace evcs
