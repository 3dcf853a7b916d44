// SPDX-License-Identifier: Apache-2.0
#include "evcs/thermal.hpp"

#include <cmath>
#include <numeric>

#include "evcs/errors.hpp"

namespace evcs {

void TransformerParams::validate(double slot_hours, bool inertial) const {
  if (!(rated_power_kw > 0.0)) throw DomainError("rated power must be positive");
  if (!(thermal_time_constant_hours > 0.0)) throw DomainError("thermal time constant must be positive");
  if (!(loss_ratio > 0.0)) throw DomainError("loss ratio must be positive");
  if (!(exponent_q > 0.0) || !(exponent_r > 0.0)) throw DomainError("exponents must be positive");
  if (!(aging_coeff_a > 0.0) || !(aging_coeff_b < 0.0))
    throw DomainError("aging coefficients need a > 0 and b < 0");
  if (inertial && thermal_time_constant_hours < slot_hours)
    throw DomainError("thermal time constant shorter than the slot duration");
}

double steady_top_oil_rise(double k, const TransformerParams& p) {
  return p.full_load_top_oil_rise_c *
         std::pow((1.0 + p.loss_ratio * k * k) / (1.0 + p.loss_ratio), p.exponent_q);
}

double hotspot_rise(double k, const TransformerParams& p) {
  return p.full_load_hotspot_rise_c * std::pow(k, 2.0 * p.exponent_r);
}

double memoryless_hotspot(double load_kw, double ambient_c, const TransformerParams& p) {
  const double k = load_kw / p.rated_power_kw;
  return ambient_c + steady_top_oil_rise(k, p) + hotspot_rise(k, p);
}

namespace {

void check_inputs(std::span<const double> load, std::span<const double> ambient) {
  if (load.size() != ambient.size())
    throw DimensionError("load and ambient sequences have different lengths");
  if (load.empty()) throw DimensionError("empty load sequence");
  for (std::size_t t = 0; t < load.size(); ++t)
    if (!(load[t] >= 0.0)) throw DomainError("negative load at slot " + std::to_string(t + 1));
}

void check_grids(const LoadProfile& load, const LoadProfile& ambient) {
  if (!(load.grid() == ambient.grid())) throw DimensionError("load and ambient grids differ");
}

void fill_aging(ThermalTrace& trace, const TransformerParams& p) {
  AgingDiagnostics diag;
  trace.aging = aging_factor(trace.hotspot_c, p, &diag);
  trace.saturated_slots = diag.saturated_slots;
}

}  // namespace

ThermalTrace hotspot_with_inertia(std::span<const double> load, std::span<const double> ambient,
                                  double slot_hours, const TransformerParams& p,
                                  std::optional<double> initial_top_oil_rise) {
  check_inputs(load, ambient);
  p.validate(slot_hours, true);
  const double gain = slot_hours / p.thermal_time_constant_hours;
  const std::size_t n = load.size();

  double top_oil = initial_top_oil_rise.value_or(
      p.initial_hotspot_c - ambient[0] - hotspot_rise(load[0] / p.rated_power_kw, p));

  ThermalTrace trace;
  trace.hotspot_c.resize(n);
  trace.top_oil_rise_c.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double k = load[t] / p.rated_power_kw;
    top_oil += gain * (steady_top_oil_rise(k, p) - top_oil);
    trace.top_oil_rise_c[t] = top_oil;
    trace.hotspot_c[t] = ambient[t] + top_oil + hotspot_rise(k, p);
  }
  fill_aging(trace, p);
  return trace;
}

ThermalTrace hotspot_with_inertia(const LoadProfile& load, const LoadProfile& ambient,
                                  const TransformerParams& p,
                                  std::optional<double> initial_top_oil_rise) {
  check_grids(load, ambient);
  return hotspot_with_inertia(load.values(), ambient.values(), load.grid().slot_duration_hours(), p,
                              initial_top_oil_rise);
}

ThermalTrace hotspot_memoryless(std::span<const double> load, std::span<const double> ambient,
                                const TransformerParams& p) {
  check_inputs(load, ambient);
  p.validate(0.0, false);
  ThermalTrace trace;
  trace.hotspot_c.resize(load.size());
  trace.top_oil_rise_c.resize(load.size());
  for (std::size_t t = 0; t < load.size(); ++t) {
    const double k = load[t] / p.rated_power_kw;
    trace.top_oil_rise_c[t] = steady_top_oil_rise(k, p);
    trace.hotspot_c[t] = ambient[t] + trace.top_oil_rise_c[t] + hotspot_rise(k, p);
  }
  fill_aging(trace, p);
  return trace;
}

ThermalTrace hotspot_memoryless(const LoadProfile& load, const LoadProfile& ambient,
                                const TransformerParams& p) {
  check_grids(load, ambient);
  return hotspot_memoryless(load.values(), ambient.values(), p);
}

double aging_factor(double hotspot_c, const TransformerParams& p) {
  return std::exp(p.aging_coeff_a * hotspot_c + p.aging_coeff_b);
}

std::vector<double> aging_factor(std::span<const double> hotspot_c, const TransformerParams& p,
                                 AgingDiagnostics* diagnostics) {
  std::vector<double> out(hotspot_c.size());
  int saturated = 0;
  for (std::size_t t = 0; t < hotspot_c.size(); ++t) {
    if (hotspot_c[t] > p.saturation_cap_c) ++saturated;
    out[t] = aging_factor(hotspot_c[t], p);
  }
  if (diagnostics) diagnostics->saturated_slots += saturated;
  return out;
}

double lifetime_years(std::span<const double> aging) {
  if (aging.empty()) throw DomainError("lifetime of an empty aging sequence");
  const double total = std::accumulate(aging.begin(), aging.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("aging sum must be positive");
  return 40.0 * static_cast<double>(aging.size()) / total;
}

double calibrate_exogenous_scale(const LoadProfile& exo, const LoadProfile& ambient,
                                 const TransformerParams& p, double kappa_max) {
  check_grids(exo, ambient);
  auto mean_aging = [&](double kappa) {
    const auto trace = hotspot_with_inertia(exo.scaled(kappa), ambient, p);
    return std::accumulate(trace.aging.begin(), trace.aging.end(), 0.0) /
           static_cast<double>(trace.aging.size());
  };
  double lo = 0.0;
  double hi = kappa_max;
  if (mean_aging(lo) > 1.0)
    throw CalibrationError("aging exceeds 1 even without exogenous load; no scale in (0, kappa_max]");
  if (mean_aging(hi) < 1.0)
    throw CalibrationError("aging stays below 1 at kappa_max = " + std::to_string(kappa_max));
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_aging(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace evcs
