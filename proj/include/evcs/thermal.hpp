// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "evcs/model.hpp"

namespace evcs {

/// Linearized top-oil-rise transformer model plus the exponential aging law.
/// Defaults describe a 100 kVA / 90 kW residential distribution transformer.
struct TransformerParams {
  double rated_power_kw = 90.0;
  double thermal_time_constant_hours = 2.5;  // top-oil time constant T0
  double loss_ratio = 5.5;                   // R: load losses / no-load losses at rated load
  double full_load_top_oil_rise_c = 55.0;
  double full_load_hotspot_rise_c = 23.0;
  double exponent_q = 1.0;
  double exponent_r = 1.0;
  double gamma = 0.83;  // stored, not used by the default model
  double aging_coeff_a = 0.12;
  double aging_coeff_b = -11.0;
  double initial_hotspot_c = 98.0;
  double saturation_cap_c = 300.0;

  /// Throws DomainError. `slot_hours` is only checked against T0 when
  /// `inertial` is set.
  void validate(double slot_hours, bool inertial) const;
};

/// Per-slot hot-spot temperature, top-oil rise and aging acceleration.
struct ThermalTrace {
  std::vector<double> hotspot_c;
  std::vector<double> top_oil_rise_c;
  std::vector<double> aging;
  int saturated_slots = 0;

  double final_top_oil_rise() const { return top_oil_rise_c.back(); }
};

struct AgingDiagnostics {
  int saturated_slots = 0;
};

/// Steady-state top-oil rise at per-unit load k.
double steady_top_oil_rise(double k, const TransformerParams& params);

/// Instantaneous hot-spot-over-top-oil rise at per-unit load k.
double hotspot_rise(double k, const TransformerParams& params);

/// Hot-spot temperature reached at steady state for a given load and ambient.
double memoryless_hotspot(double load_kw, double ambient_c, const TransformerParams& params);

/// Inertial model: first-order lag on the top-oil rise. When
/// `initial_top_oil_rise` is empty the state is seeded so that the hot-spot
/// temperature before slot 1 equals `initial_hotspot_c`.
ThermalTrace hotspot_with_inertia(std::span<const double> load_kw, std::span<const double> ambient_c,
                                  double slot_hours, const TransformerParams& params,
                                  std::optional<double> initial_top_oil_rise = std::nullopt);
ThermalTrace hotspot_with_inertia(const LoadProfile& load, const LoadProfile& ambient,
                                  const TransformerParams& params,
                                  std::optional<double> initial_top_oil_rise = std::nullopt);

ThermalTrace hotspot_memoryless(std::span<const double> load_kw, std::span<const double> ambient_c,
                                const TransformerParams& params);
ThermalTrace hotspot_memoryless(const LoadProfile& load, const LoadProfile& ambient,
                                const TransformerParams& params);

/// A_t = exp(a θ_t + b). Temperatures above the saturation cap are counted in
/// `diagnostics` but the value is still returned.
double aging_factor(double hotspot_c, const TransformerParams& params);
std::vector<double> aging_factor(std::span<const double> hotspot_c, const TransformerParams& params,
                                 AgingDiagnostics* diagnostics = nullptr);

/// 40 · N / Σ A_t.
double lifetime_years(std::span<const double> aging);

/// Scale κ such that κ·exo gives mean aging 1 (40-year lifetime) under the
/// inertial model. Bisection on (0, kappa_max].
double calibrate_exogenous_scale(const LoadProfile& exo, const LoadProfile& ambient,
                                 const TransformerParams& params, double kappa_max = 100.0);

}  // namespace evcs
