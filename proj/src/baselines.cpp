// SPDX-License-Identifier: Apache-2.0
#include "evcs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evcs/errors.hpp"

namespace evcs {

std::vector<double> ContinuousProfileSet::aggregate() const {
  std::vector<double> sum(grid.slot_count(), 0.0);
  for (const auto& row : power_kw)
    for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += row[t];
  return sum;
}

ContinuousProfileSet rectangular_profiles(const FleetSpec& fleet, const ScheduleVector& s) {
  validate_schedule(fleet, s);
  ContinuousProfileSet set{fleet.grid(), {}, true, 0};
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    std::vector<double> row(fleet.grid().slot_count(), 0.0);
    for (int t = s[i]; t < s[i] + fleet.ev(i).duration; ++t) row[t - 1] = fleet.charging_power_kw();
    set.power_kw.push_back(std::move(row));
  }
  return set;
}

double energy_need_kw_slots(const FleetSpec& fleet, std::size_t ev_index) {
  return fleet.ev(ev_index).duration * fleet.charging_power_kw();
}

ScheduleVector plug_and_charge(const FleetSpec& fleet) {
  ScheduleVector s;
  for (const auto& ev : fleet.evs()) s.starts.push_back(ev.arrival);
  return s;
}

ValleyFill valley_fill_exact(std::span<const double> exo, double energy, double p, double lower,
                             double upper) {
  if (exo.empty()) throw DimensionError("valley fill over an empty profile");
  if (!(p > 0.0)) throw DomainError("power scale must be positive");
  if (!(lower <= upper)) throw DomainError("lower bound exceeds upper bound");
  const double n = static_cast<double>(exo.size());
  if (energy < lower * n - 1e-12 * std::abs(energy) || energy > upper * n + 1e-12 * std::abs(energy))
    throw FeasibilityError("energy " + std::to_string(energy) + " not reachable within the bounds");

  auto fill = [&](double level, std::vector<double>* x) {
    double sum = 0.0;
    for (std::size_t t = 0; t < exo.size(); ++t) {
      const double v = std::clamp((level - exo[t]) / p, lower, upper);
      if (x) (*x)[t] = v;
      sum += v;
    }
    return sum;
  };

  double lo = exo[0] + p * lower;
  double hi = exo[0] + p * upper;
  for (double e : exo) {
    lo = std::min(lo, e + p * lower);
    hi = std::max(hi, e + p * upper);
  }
  const double tol = 1e-9 * std::max(std::abs(energy), 1e-300);
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double sum = fill(mid, nullptr);
    if (std::abs(sum - energy) <= 1e-3 * tol) {
      lo = hi = mid;
      break;
    }
    (sum < energy ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::max(std::abs(hi), 1.0)) break;
  }
  ValleyFill result;
  result.x.assign(exo.size(), 0.0);
  result.level = 0.5 * (lo + hi);
  const double sum = fill(result.level, &result.x);
  if (std::abs(sum - energy) > tol) throw FeasibilityError("valley fill bisection did not meet the energy target");
  return result;
}

std::vector<double> project_capped_simplex(std::span<const double> y, double total, double lower,
                                           double upper) {
  const double n = static_cast<double>(y.size());
  if (y.empty()) throw DimensionError("projection of an empty vector");
  if (total < lower * n - 1e-9 * std::abs(total) || total > upper * n + 1e-9 * std::abs(total))
    throw FeasibilityError("capped simplex is empty");

  // g(λ) = Σ clamp(y_t - λ, lower, upper) is nonincreasing and piecewise linear.
  auto g = [&](double lambda) {
    double s = 0.0;
    for (double v : y) s += std::clamp(v - lambda, lower, upper);
    return s;
  };
  std::vector<double> breaks;
  breaks.reserve(2 * y.size());
  for (double v : y) {
    breaks.push_back(v - upper);
    breaks.push_back(v - lower);
  }
  std::sort(breaks.begin(), breaks.end());
  // Largest breakpoint with g >= total, and the next one.
  std::size_t lo = 0, hi = breaks.size() - 1;
  if (g(breaks[hi]) >= total) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (g(breaks[mid]) >= total ? lo : hi) = mid;
    }
  }
  double lambda = breaks[lo];
  const double g_lo = g(breaks[lo]);
  if (lo + 1 < breaks.size() && g_lo > total) {
    const double g_hi = g(breaks[lo + 1]);
    if (g_lo > g_hi) lambda = breaks[lo] + (g_lo - total) * (breaks[lo + 1] - breaks[lo]) / (g_lo - g_hi);
  }
  std::vector<double> x(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) x[t] = std::clamp(y[t] - lambda, lower, upper);
  return x;
}

namespace {

double resolve_cap(const FleetSpec& fleet, double max_power_kw) {
  return max_power_kw > 0.0 ? max_power_kw : fleet.charging_power_kw();
}

void check_energy_fits(const FleetSpec& fleet, std::size_t i, double cap) {
  const auto& ev = fleet.ev(i);
  if (energy_need_kw_slots(fleet, i) > cap * (ev.departure - ev.arrival + 1) * (1.0 + 1e-12))
    throw FeasibilityError("EV " + std::to_string(ev.id) + ": energy need exceeds cap over its window");
}

}  // namespace

ContinuousProfileSet gan_style_schedule(const FleetSpec& fleet, const LoadProfile& exo, const GanOptions& options) {
  if (!(exo.grid() == fleet.grid())) throw DimensionError("exogenous profile and fleet grids differ");
  if (!(options.penalty_weight > 0.0)) throw ConfigError("penalty weight must be positive");
  const double cap = resolve_cap(fleet, options.max_power_kw);
  const std::size_t I = fleet.size();
  const int T = exo.size();

  ContinuousProfileSet set{fleet.grid(), {}, false, 0};
  for (std::size_t i = 0; i < I; ++i) {
    check_energy_fits(fleet, i, cap);
    const auto& ev = fleet.ev(i);
    std::vector<double> row(T, 0.0);
    const double share = energy_need_kw_slots(fleet, i) / (ev.departure - ev.arrival + 1);
    for (int t = ev.arrival; t <= ev.departure; ++t) row[t - 1] = share;
    set.power_kw.push_back(std::move(row));
  }

  // Broadcast price: marginal losses J'(D) normalized by J'' and split over
  // the fleet, price_t = D_t / (2I). Each EV then minimizes
  // Σ price_t x_t + (w/2) ‖x - x^k‖², a projected gradient step of length 1/w.
  const double price_gain = 1.0 / (2.0 * static_cast<double>(I));
  std::vector<double> demand(T);
  for (int k = 1; k <= options.max_iters; ++k) {
    const auto agg = set.aggregate();
    for (int t = 0; t < T; ++t) demand[t] = exo.values()[t] + agg[t];
    double change = 0.0;
    for (std::size_t i = 0; i < I; ++i) {
      const auto& ev = fleet.ev(i);
      auto& row = set.power_kw[i];
      std::vector<double> y;
      for (int t = ev.arrival; t <= ev.departure; ++t)
        y.push_back(row[t - 1] - price_gain * demand[t - 1] / options.penalty_weight);
      const auto x = project_capped_simplex(y, energy_need_kw_slots(fleet, i), 0.0, cap);
      for (int t = ev.arrival; t <= ev.departure; ++t) {
        change = std::max(change, std::abs(x[t - ev.arrival] - row[t - 1]));
        row[t - 1] = x[t - ev.arrival];
      }
    }
    set.iterations = k;
    if (change <= options.tolerance) {
      set.converged = true;
      break;
    }
  }
  return set;
}

ContinuousProfileSet shinwari_style_schedule(const FleetSpec& fleet, const LoadProfile& exo, double max_power_kw) {
  if (!(exo.grid() == fleet.grid())) throw DimensionError("exogenous profile and fleet grids differ");
  const double cap = resolve_cap(fleet, max_power_kw);
  const int T = exo.size();
  const auto v = exo.values();
  const double peak = *std::max_element(v.begin(), v.end());

  ContinuousProfileSet set{fleet.grid(), {}, true, 0};
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    check_energy_fits(fleet, i, cap);
    const auto& ev = fleet.ev(i);
    const double energy = energy_need_kw_slots(fleet, i);
    const int width = ev.departure - ev.arrival + 1;
    std::vector<double> row(T, 0.0);

    double weight_sum = 0.0;
    for (int t = ev.arrival; t <= ev.departure; ++t) weight_sum += peak - v[t - 1];
    for (int t = ev.arrival; t <= ev.departure; ++t)
      row[t - 1] = weight_sum > 0.0 ? energy * (peak - v[t - 1]) / weight_sum : energy / width;

    std::vector<bool> capped(T, false);
    for (int pass = 0; pass < T; ++pass) {
      double excess = 0.0;
      for (int t = ev.arrival; t <= ev.departure; ++t) {
        if (row[t - 1] > cap) {
          excess += row[t - 1] - cap;
          row[t - 1] = cap;
          capped[t - 1] = true;
        }
      }
      if (excess <= 0.0) break;
      int free_slots = 0;
      for (int t = ev.arrival; t <= ev.departure; ++t) free_slots += capped[t - 1] ? 0 : 1;
      if (free_slots == 0) throw FeasibilityError("EV " + std::to_string(ev.id) + ": energy does not fit under the cap");
      for (int t = ev.arrival; t <= ev.departure; ++t)
        if (!capped[t - 1]) row[t - 1] += excess / free_slots;
    }
    set.power_kw.push_back(std::move(row));
  }
  return set;
}

}  // namespace evcs
