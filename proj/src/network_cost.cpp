// SPDX-License-Identifier: Apache-2.0
#include "evcs/network_cost.hpp"

#include <algorithm>
#include <cmath>

#include "evcs/errors.hpp"

namespace evcs {

PricingFunction PricingFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ConfigError("tabulated pricing function needs at least two knots");
  for (std::size_t k = 1; k < knots.size(); ++k)
    if (!(knots[k].first > knots[k - 1].first) || !(knots[k].second > knots[k - 1].second))
      throw ConfigError("tabulated pricing function must be strictly increasing");
  PricingFunction f;
  f.knots_ = std::move(knots);
  return f;
}

double PricingFunction::operator()(double x) const {
  if (knots_.empty()) return x;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const auto& knot) { return v < knot.first; });
  std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  hi = std::clamp<std::size_t>(hi, 1, knots_.size() - 1);
  const auto& [x0, y0] = knots_[hi - 1];
  const auto& [x1, y1] = knots_[hi];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

void CostConfig::validate(int slot_count, std::size_t fleet_size) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  if (!(r_transfo_ohm >= 0.0) || !(r_line_ohm >= 0.0)) throw ConfigError("resistances must be nonnegative");
  for (int t : common_window)
    if (t < 1 || t > slot_count)
      throw DomainError("common window slot " + std::to_string(t) + " outside 1.." + std::to_string(slot_count));
  if (pricing.size() > 1 && pricing.size() != fleet_size)
    throw ConfigError("need one pricing function per EV (or a single shared one)");
  if (ev_cost_mode == EvCostMode::PriceSum) {
    if (prices.empty()) throw ConfigError("price-sum EV cost requires a price profile");
    if (prices.size() > 1 && prices.size() != fleet_size)
      throw ConfigError("need one price profile per EV (or a single shared one)");
    for (const auto& p : prices)
      if (static_cast<int>(p.size()) != slot_count) throw DimensionError("price profile length differs from T");
  }
}

const PricingFunction& CostConfig::pricing_for(std::size_t ev_index) const {
  static const PricingFunction kIdentity = PricingFunction::identity();
  if (pricing.empty()) return kIdentity;
  return pricing.size() == 1 ? pricing.front() : pricing.at(ev_index);
}

void GameContext::validate() const {
  if (!(exo.grid() == fleet.grid())) throw DimensionError("exogenous profile and fleet grids differ");
  if (!(ambient.grid() == exo.grid())) throw DimensionError("ambient and exogenous grids differ");
  params.validate(exo.grid().slot_duration_hours(), config.inertia_mode == InertiaMode::WithInertia);
  config.validate(exo.size(), fleet.size());
}

double joule_losses(double total_load_kw, const CostConfig& config) {
  return config.resistance() * total_load_kw * total_load_kw;
}

double ev_individual_cost(const EvSpec& ev, int start, const CostConfig& config) {
  if (config.ev_cost_mode == EvCostMode::Zero) return 0.0;
  if (config.prices.empty()) throw ConfigError("price-sum EV cost requires a price profile");
  const auto& prices =
      config.prices.size() == 1 ? config.prices.front() : config.prices.at(static_cast<std::size_t>(ev.id - 1));
  if (start < 1 || start + ev.duration - 1 > static_cast<int>(prices.size()))
    throw DomainError("charging slots outside the price profile");
  double sum = 0.0;
  for (int t = start; t < start + ev.duration; ++t) sum += prices[t - 1];
  return config.beta * sum;
}

ThermalTrace game_thermal_trace(const LoadProfile& total, const GameContext& ctx) {
  if (ctx.config.inertia_mode == InertiaMode::Memoryless)
    return hotspot_memoryless(total, ctx.ambient, ctx.params);
  return hotspot_with_inertia(total, ctx.ambient, ctx.params, ctx.initial_top_oil_rise);
}

std::vector<double> slot_network_costs(const LoadProfile& total, const GameContext& ctx) {
  const double alpha = ctx.config.alpha;
  std::vector<double> cost(total.size(), 0.0);
  if (!ctx.config.include_dn_cost) return cost;
  std::vector<double> aging;
  if (alpha > 0.0) aging = game_thermal_trace(total, ctx).aging;
  for (int t = 0; t < total.size(); ++t) {
    const double losses = joule_losses(total.values()[t], ctx.config);
    cost[t] = (alpha > 0.0 ? alpha * aging[t] : 0.0) + (1.0 - alpha) * losses;
  }
  return cost;
}

std::vector<int> cost_window(std::size_t ev_index, int start, const GameContext& ctx) {
  std::vector<int> window;
  if (ctx.config.window_mode == WindowMode::Own) {
    for (int t = start; t < start + ctx.fleet.ev(ev_index).duration; ++t) window.push_back(t);
  } else if (ctx.config.common_window.empty()) {
    for (int t = 1; t <= ctx.exo.size(); ++t) window.push_back(t);
  } else {
    window = ctx.config.common_window;
  }
  for (int t : window)
    if (t < 1 || t > ctx.exo.size()) throw DomainError("cost window slot " + std::to_string(t) + " out of range");
  return window;
}

namespace {

double window_sum(const std::vector<double>& slot_costs, const std::vector<int>& window) {
  double sum = 0.0;
  for (int t : window) sum += slot_costs[t - 1];
  return sum;
}

double payoff_from_slot_costs(std::size_t i, const ScheduleVector& s, const GameContext& ctx,
                              const std::vector<double>& slot_costs) {
  const double dn = window_sum(slot_costs, cost_window(i, s[i], ctx));
  const double ev = ev_individual_cost(ctx.fleet.ev(i), s[i], ctx.config);
  return -ctx.config.pricing_for(i)(dn + ev);
}

std::vector<double> schedule_slot_costs(const ScheduleVector& s, const GameContext& ctx) {
  return slot_network_costs(total_load(ctx.exo, ctx.fleet, s), ctx);
}

}  // namespace

double dn_cost(std::size_t ev_index, const ScheduleVector& s, const GameContext& ctx) {
  const auto slot_costs = schedule_slot_costs(s, ctx);
  return window_sum(slot_costs, cost_window(ev_index, s[ev_index], ctx));
}

double payoff(std::size_t ev_index, const ScheduleVector& s, const GameContext& ctx) {
  return payoff_from_slot_costs(ev_index, s, ctx, schedule_slot_costs(s, ctx));
}

std::vector<double> payoffs(const ScheduleVector& s, const GameContext& ctx) {
  const auto slot_costs = schedule_slot_costs(s, ctx);
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = payoff_from_slot_costs(i, s, ctx, slot_costs);
  return u;
}

double sum_payoff(const ScheduleVector& s, const GameContext& ctx) {
  double w = 0.0;
  for (double u : payoffs(s, ctx)) w += u;
  return w;
}

namespace {

double individual_cost_sum(const ScheduleVector& s, const GameContext& ctx) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += ev_individual_cost(ctx.fleet.ev(i), s[i], ctx.config);
  return sum;
}

}  // namespace

double potential_common_window(const ScheduleVector& s, const GameContext& ctx) {
  if (ctx.config.window_mode != WindowMode::Common)
    throw ModeError("the common-window potential requires CommonWindow mode");
  const auto slot_costs = schedule_slot_costs(s, ctx);
  return -window_sum(slot_costs, cost_window(0, s[0], ctx)) - individual_cost_sum(s, ctx);
}

double potential_own_window_memoryless(const ScheduleVector& s, const GameContext& ctx) {
  const auto& cfg = ctx.config;
  if (cfg.window_mode != WindowMode::Own)
    throw ModeError("the own-window potential requires OwnWindow mode");
  if (cfg.inertia_mode != InertiaMode::Memoryless && cfg.alpha != 0.0 && cfg.include_dn_cost)
    throw ModeError("the own-window potential requires the memoryless thermal model (or alpha = 0)");
  double phi = -individual_cost_sum(s, ctx);
  if (!cfg.include_dn_cost) return phi;
  const auto n = occupancy(ctx.fleet, s);
  const double power = ctx.fleet.charging_power_kw();
  for (int t = 0; t < ctx.exo.size(); ++t) {
    for (int v = 0; v <= n[t]; ++v) {
      const double load = ctx.exo.values()[t] + power * v;
      double cost = (1.0 - cfg.alpha) * joule_losses(load, cfg);
      if (cfg.alpha > 0.0)
        cost += cfg.alpha * aging_factor(memoryless_hotspot(load, ctx.ambient.values()[t], ctx.params), ctx.params);
      phi -= cost;
    }
  }
  return phi;
}

std::optional<PotentialKind> applicable_potential(const CostConfig& config) {
  if (config.window_mode == WindowMode::Common) return PotentialKind::CommonWindow;
  if (config.inertia_mode == InertiaMode::Memoryless || config.alpha == 0.0 || !config.include_dn_cost)
    return PotentialKind::OwnWindowMemoryless;
  return std::nullopt;
}

double potential(PotentialKind kind, const ScheduleVector& s, const GameContext& ctx) {
  return kind == PotentialKind::CommonWindow ? potential_common_window(s, ctx)
                                             : potential_own_window_memoryless(s, ctx);
}

bool strictly_greater(double a, double b) {
  return a - b > 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
}

int tolerant_sign(double delta, double scale) {
  const double band = 1e-12 * std::max(std::abs(scale), 1e-300);
  if (delta > band) return 1;
  if (delta < -band) return -1;
  return 0;
}

}  // namespace evcs
