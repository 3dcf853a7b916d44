// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evcs/baselines.hpp"
#include "evcs/brd.hpp"
#include "evcs/mobility.hpp"
#include "evcs/network_cost.hpp"
#include "evcs/random.hpp"
#include "evcs/thermal.hpp"

namespace evcs {

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Additive Gaussian forecast error on the exogenous demand.
struct ForecastNoiseModel {
  double fsnr_db = kNoNoise;
  bool per_slot_iid = true;  // false: a single offset shared by every slot of the day
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// σ with σ² = mean_t(L_t²) / 10^(FSNR/10); zero for FSNR = +inf.
double forecast_noise_sigma(std::span<const double> day_profile, double fsnr_db);

/// L̃ = max(L + Z, 0), σ computed over `exo` itself.
LoadProfile apply_forecast_noise(const LoadProfile& exo, const ForecastNoiseModel& model);

/// Same with an explicit σ and stream; σ = 0 returns `exo` unchanged.
LoadProfile apply_forecast_noise(const LoadProfile& exo, double sigma, bool per_slot_iid, Rng& rng);

/// Synthetic substitute for metered data: double-peak household demand with
/// a winter-heavy seasonal envelope, a sinusoidal ambient temperature year,
/// and a two-level tariff. Days start at `start_hour` and the charging window
/// is the first `window_slots` slots.
struct SyntheticWorldConfig {
  int days = 30;
  int slots_per_day = 48;
  int window_slots = 30;
  double slot_hours = 0.5;
  double start_hour = 17.0;
  std::uint64_t seed = 2012;
  double demand_jitter = 0.05;  // relative, per slot
  // Demand shape (arbitrary units, rescaled by calibration).
  double base_demand = 0.55;
  double evening_peak = 0.9;
  double morning_peak = 0.5;
  double midday_peak = 0.25;
  double evening_width_hours = 2.5;
  double morning_width_hours = 2.0;
  double seasonal_swing = 0.35;  // relative winter increase of the peaks
  double ambient_jitter_c = 1.0;
  double peak_price = 0.1572;
  double offpeak_price = 0.1096;
  double offpeak_start_hour = 22.0;
  double offpeak_end_hour = 6.0;

  void validate() const;
};

struct World {
  SyntheticWorldConfig config;
  TransformerParams params;
  double kappa = 1.0;                            // calibration scale applied to the raw demand
  std::vector<std::vector<double>> exo_days;      // calibrated demand, kW
  std::vector<std::vector<double>> ambient_days;  // °C
  std::vector<double> window_prices;             // per charging-window slot

  TimeGrid day_grid() const { return {config.slots_per_day, config.slot_hours}; }
  TimeGrid window_grid() const { return {config.window_slots, config.slot_hours}; }
  int day_count() const { return static_cast<int>(exo_days.size()); }
  LoadProfile exo_profile() const;      // all days concatenated
  LoadProfile ambient_profile() const;  // all days concatenated
};

/// Generates the synthetic year sample and calibrates it so that the no-EV
/// horizon has a 40-year lifetime.
World make_world(const SyntheticWorldConfig& config, const TransformerParams& params = {});

/// Builds a world from concatenated day-major data (length days · slots_per_day).
/// With `calibrate` the demand is rescaled as in make_world.
World make_world_from_data(const SyntheticWorldConfig& config, std::span<const double> exo_kw,
                           std::span<const double> ambient_c, std::vector<double> window_prices,
                           const TransformerParams& params = {}, bool calibrate = true);

enum class MobilityScenario { Symmetric, Survey };

struct FleetScenario {
  MobilityScenario kind = MobilityScenario::Symmetric;
  int arrival = 1;
  int departure = 30;
  int duration = 16;
  MobilityStats stats;
  double charging_power_kw = 3.0;
};

FleetSpec draw_fleet(const FleetScenario& scenario, TimeGrid window, int fleet_size, Rng& rng);

enum class Policy { NoEV, PlugAndCharge, Brd, GanStyle, ShinwariStyle };

const char* policy_name(Policy policy);
Policy parse_policy(const std::string& name);

/// Everything that defines one simulated policy run besides the world.
struct SimulationSetup {
  FleetScenario fleet;
  int fleet_size = 10;
  ForecastNoiseModel noise;
  CostConfig cost;
  BrdConfig brd;
  GanOptions gan;
  int first_day = 0;
  int day_count = 0;  // 0: through the last day

  SimulationSetup();
};

struct PolicyOutcome {
  double lifetime_years = 0.0;
  double aging_sum = 0.0;
  double losses = 0.0;  // Σ_t (R_transfo + R_line) L_t² over every slot
  double normalized_aging = 0.0;
  double normalized_losses = 0.0;
  double monetary_cost = 0.0;  // mean over EVs and days of Σ_t π_t x_t / P
  double brd_rounds = 0.0;     // mean rounds to fixed point (BRD only)
  bool all_converged = true;
  int days = 0;
};

/// Day-by-day simulation: schedules are computed on the noisy forecast of
/// the charging window and evaluated on the true demand of the whole day,
/// with the top-oil state carried from one day to the next. Fleets and
/// noise are drawn from streams derived from `replicate_seed` and the day
/// index, so every policy sees the same draws.
PolicyOutcome simulate_policy(const World& world, Policy policy, const SimulationSetup& setup,
                              std::uint64_t replicate_seed);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double lo68 = 0.0;  // 16th percentile
  double hi68 = 0.0;  // 84th percentile

  static Summary of(std::vector<double> samples);
};

struct ReportRow {
  std::vector<std::pair<std::string, double>> sweep;  // named sweep coordinates
  std::string policy;
  std::string metric;
  int replicates = 0;
  Summary value;
  bool feasible = true;
};

struct ExperimentReport {
  std::string scenario;
  std::vector<std::string> sweep_names;
  std::vector<ReportRow> rows;

  /// Row with the given policy, metric and sweep coordinates, or nullptr.
  const ReportRow* find(const std::string& policy, const std::string& metric,
                        const std::vector<std::pair<std::string, double>>& sweep) const;
};

struct StudyOptions {
  int replicates = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct ConvergenceStudy {
  std::vector<int> fleet_sizes{1, 2, 5, 10, 15, 20};
  double sigma_kw = 26.0;
  FleetScenario fleet;
  CostConfig cost;
  BrdConfig brd;
};

/// Fraction of random Gaussian demand draws (mean: the world's average
/// window profile, σ per slot, clipped at 0) on which BRD reaches a fixed
/// point within max_rounds, and the rounds needed.
ExperimentReport convergence_probability_sweep(const World& world, const ConvergenceStudy& study,
                                               const StudyOptions& options);

struct LifetimeStudy {
  std::vector<Policy> policies{Policy::NoEV, Policy::PlugAndCharge, Policy::Brd, Policy::GanStyle,
                               Policy::ShinwariStyle};
  std::vector<int> fleet_sizes{5, 10, 20};
  std::vector<double> fsnr_db{kNoNoise, 4.0};
  SimulationSetup setup;

  LifetimeStudy();
};

/// Lifetime, normalized losses and aging per (policy, I, FSNR).
ExperimentReport lifetime_vs_fleet(const World& world, const LifetimeStudy& study, const StudyOptions& options);

struct PowerStudy {
  std::vector<double> power_grid_kw{2.2, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0};
  std::vector<int> fleet_sizes{5, 10};
  std::vector<double> fsnr_db{kNoNoise, -10.0};
  double energy_need_kwh = 24.0;
  SimulationSetup setup;  // fleet kind, arrival and departure are used; durations follow the power
};

/// Slots needed to deliver `energy_kwh` at `power_kw`: ceil(E / (p Δt)).
int duration_for_power(double energy_kwh, double power_kw, double slot_hours);

/// C = ceil(E / (p Δt)) per grid point; BRD lifetime per (I, FSNR, p) and the
/// argmax power ("optimal_power_kw" rows). Points whose C exceeds the
/// window are reported with feasible = false.
ExperimentReport optimal_power_search(const World& world, const PowerStudy& study, const StudyOptions& options);

struct ParetoStudy {
  std::vector<double> alpha_grid{0.0, 0.5, 0.9, 0.99, 0.999, 0.9999, 1.0};
  std::vector<double> time_constants_hours{0.5, 2.5};
  int day = 0;
  SimulationSetup setup;  // survey mobility by default

  ParetoStudy();
};

/// Single-day BRD outcome per (T0, α): aging and losses normalized by the
/// no-EV day.
ExperimentReport pareto_frontier(const World& world, const ParetoStudy& study);

enum class MoneyObjective { MoneyOnly, AgingOnly, LossesOnly };
const char* objective_name(MoneyObjective objective);

struct MoneyStudy {
  std::vector<int> fleet_sizes{5, 10, 20};
  std::vector<double> prices;  // charging-window tariff; empty uses the world's
  SimulationSetup setup;
};

/// Mean per-EV Σπ over charged slots at the BRD outcome, per objective and I.
/// ConfigError when no tariff is available.
ExperimentReport monetary_cost_comparison(const World& world, const MoneyStudy& study, const StudyOptions& options);

}  // namespace evcs
