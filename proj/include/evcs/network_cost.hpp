// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "evcs/model.hpp"
#include "evcs/thermal.hpp"

namespace evcs {

/// Strictly increasing map f_i applied to an EV's total cost. Either the
/// identity or piecewise-linear through tabulated knots (linear extrapolation
/// beyond the end knots).
class PricingFunction {
 public:
  static PricingFunction identity() { return PricingFunction(); }
  static PricingFunction tabulated(std::vector<std::pair<double, double>> knots);

  double operator()(double cost) const;
  bool is_identity() const { return knots_.empty(); }

 private:
  PricingFunction() = default;
  std::vector<std::pair<double, double>> knots_;
};

enum class WindowMode { Own, Common };
enum class InertiaMode { WithInertia, Memoryless };
enum class EvCostMode { Zero, PriceSum };

/// Everything that shapes an EV's cost besides the physical inputs.
struct CostConfig {
  double alpha = 1.0;  // weight of transformer aging against losses
  double beta = 1.0;   // weight of the individual price term
  double r_transfo_ohm = 0.03;
  double r_line_ohm = 0.03;
  WindowMode window_mode = WindowMode::Own;
  std::vector<int> common_window;  // 1-based slots; empty means the whole horizon
  std::vector<PricingFunction> pricing;  // empty: identity; one entry: shared; else per EV
  EvCostMode ev_cost_mode = EvCostMode::Zero;
  std::vector<std::vector<double>> prices;  // one shared profile or one per EV
  InertiaMode inertia_mode = InertiaMode::WithInertia;
  bool include_dn_cost = true;  // false zeroes g^DN (money-only objective)

  void validate(int slot_count, std::size_t fleet_size) const;
  double resistance() const { return r_transfo_ohm + r_line_ohm; }
  const PricingFunction& pricing_for(std::size_t ev_index) const;
};

/// The full game: physical inputs plus cost settings.
struct GameContext {
  LoadProfile exo;
  LoadProfile ambient;
  FleetSpec fleet;
  TransformerParams params;
  CostConfig config;
  std::optional<double> initial_top_oil_rise;  // thermal state before slot 1

  /// Checks grids, fleet and config consistency.
  void validate() const;
};

double joule_losses(double total_load_kw, const CostConfig& config);

/// β Σ_{t=s}^{s+C-1} π_{i,t} in PriceSum mode, 0 otherwise. The EV's price
/// profile is selected by its id.
double ev_individual_cost(const EvSpec& ev, int start, const CostConfig& config);

ThermalTrace game_thermal_trace(const LoadProfile& total, const GameContext& ctx);

/// Per-slot network cost α A_t + (1-α) J(L_t) for a total-load profile.
std::vector<double> slot_network_costs(const LoadProfile& total, const GameContext& ctx);

/// Slots over which EV `ev_index` (0-based) is charged for the network.
std::vector<int> cost_window(std::size_t ev_index, int start, const GameContext& ctx);

double dn_cost(std::size_t ev_index, const ScheduleVector& s, const GameContext& ctx);
double payoff(std::size_t ev_index, const ScheduleVector& s, const GameContext& ctx);

/// All payoffs from one thermal evaluation.
std::vector<double> payoffs(const ScheduleVector& s, const GameContext& ctx);

/// w(s) = Σ_i u_i(s).
double sum_payoff(const ScheduleVector& s, const GameContext& ctx);

/// Φ_(a): common window, any inertia. ModeError in own-window mode.
double potential_common_window(const ScheduleVector& s, const GameContext& ctx);

/// Φ_(b): own windows, memoryless thermal model (or α = 0). ModeError otherwise.
double potential_own_window_memoryless(const ScheduleVector& s, const GameContext& ctx);

enum class PotentialKind { CommonWindow, OwnWindowMemoryless };

/// Which potential (if any) makes the configured game an ordinal potential game.
std::optional<PotentialKind> applicable_potential(const CostConfig& config);

double potential(PotentialKind kind, const ScheduleVector& s, const GameContext& ctx);

/// Comparison used for "strictly better": differences within a relative
/// 1e-12 band count as ties.
bool strictly_greater(double a, double b);
int tolerant_sign(double delta, double scale);

}  // namespace evcs
