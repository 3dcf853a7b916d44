// SPDX-License-Identifier: Apache-2.0
// Independent reference computations for tests. Only the data types come from
// the library; every formula is re-derived here from scratch.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "evcs/network_cost.hpp"

namespace oracle {

// Default transformer constants written out literally.
inline constexpr double kRated = 90.0;
inline constexpr double kR = 5.5;
inline constexpr double kTopOilFl = 55.0;
inline constexpr double kHotspotFl = 23.0;
inline constexpr double kA = 0.12;
inline constexpr double kB = -11.0;

inline double hotspot_memoryless(double load_kw, double ambient_c) {
  const double k = load_kw / kRated;
  return ambient_c + kTopOilFl * (1.0 + kR * k * k) / (1.0 + kR) + kHotspotFl * k * k;
}

inline double aging(double hotspot_c) { return std::exp(kA * hotspot_c + kB); }

/// Hot-spot trace with a first-order top-oil lag, seeded so that the
/// temperature before slot 1 is `theta0` (default parameters, q = r = 1).
inline std::vector<double> hotspot_inertial(const std::vector<double>& load, const std::vector<double>& ambient,
                                            double slot_hours, double tau_hours, double theta0 = 98.0) {
  std::vector<double> out(load.size());
  const double k1 = load.front() / kRated;
  double oil = theta0 - ambient.front() - kHotspotFl * k1 * k1;
  for (std::size_t t = 0; t < load.size(); ++t) {
    const double k = load[t] / kRated;
    const double steady = kTopOilFl * (1.0 + kR * k * k) / (1.0 + kR);
    oil = oil + (slot_hours / tau_hours) * (steady - oil);
    out[t] = ambient[t] + oil + kHotspotFl * k * k;
  }
  return out;
}

/// Plain-data description of a small game, evaluated without the library.
struct Game {
  int T = 5;
  double slot_hours = 0.5;
  double tau_hours = 2.5;
  double P = 3.0;
  std::vector<double> exo;
  std::vector<double> ambient;
  std::vector<int> a, d, C;
  double alpha = 1.0;
  double beta = 0.0;
  bool common = false;
  std::vector<int> window;  // common window (1-based); empty = all slots
  bool memoryless = true;
  std::vector<double> prices;  // shared, empty = no individual cost
  double resistance = 0.06;

  int size() const { return static_cast<int>(a.size()); }

  std::vector<double> load(const std::vector<int>& s) const {
    std::vector<double> L = exo;
    for (int i = 0; i < size(); ++i)
      for (int t = s[i]; t < s[i] + C[i]; ++t) L[t - 1] += P;
    return L;
  }

  std::vector<double> slot_cost(const std::vector<double>& L) const {
    std::vector<double> hs(T);
    if (memoryless) {
      for (int t = 0; t < T; ++t) hs[t] = hotspot_memoryless(L[t], ambient[t]);
    } else {
      hs = hotspot_inertial(L, ambient, slot_hours, tau_hours);
    }
    std::vector<double> c(T);
    for (int t = 0; t < T; ++t) c[t] = alpha * aging(hs[t]) + (1.0 - alpha) * resistance * L[t] * L[t];
    return c;
  }

  double ev_cost(int i, int start) const {
    if (prices.empty()) return 0.0;
    double sum = 0.0;
    for (int t = start; t < start + C[i]; ++t) sum += prices[t - 1];
    return beta * sum;
  }

  std::vector<int> cost_slots(int i, int start) const {
    std::vector<int> w;
    if (!common) {
      for (int t = start; t < start + C[i]; ++t) w.push_back(t);
    } else if (window.empty()) {
      for (int t = 1; t <= T; ++t) w.push_back(t);
    } else {
      w = window;
    }
    return w;
  }

  double total_cost(int i, const std::vector<int>& s) const {
    const auto c = slot_cost(load(s));
    double g = 0.0;
    for (int t : cost_slots(i, s[i])) g += c[t - 1];
    return g + ev_cost(i, s[i]);
  }

  double payoff(int i, const std::vector<int>& s) const { return -total_cost(i, s); }

  double welfare(const std::vector<int>& s) const {
    double w = 0.0;
    for (int i = 0; i < size(); ++i) w += payoff(i, s);
    return w;
  }

  /// Common-window potential.
  double phi_a(const std::vector<int>& s) const {
    const auto c = slot_cost(load(s));
    double phi = 0.0;
    for (int t : cost_slots(0, s[0])) phi -= c[t - 1];
    for (int i = 0; i < size(); ++i) phi -= ev_cost(i, s[i]);
    return phi;
  }

  /// Own-window potential: Σ_t Σ_{v=0}^{n_t} cost(L^exo_t + P v), memoryless.
  double phi_b(const std::vector<int>& s) const {
    std::vector<int> n(T, 0);
    for (int i = 0; i < size(); ++i)
      for (int t = s[i]; t < s[i] + C[i]; ++t) ++n[t - 1];
    double phi = 0.0;
    for (int t = 0; t < T; ++t)
      for (int v = 0; v <= n[t]; ++v) {
        const double L = exo[t] + P * v;
        phi -= alpha * aging(hotspot_memoryless(L, ambient[t])) + (1.0 - alpha) * resistance * L * L;
      }
    for (int i = 0; i < size(); ++i) phi -= ev_cost(i, s[i]);
    return phi;
  }

  std::vector<int> actions(int i) const {
    std::vector<int> out;
    for (int s = a[i]; s <= d[i] - C[i] + 1; ++s) out.push_back(s);
    return out;
  }

  /// Calls fn on every joint schedule (odometer over action sets).
  void for_each_schedule(const std::function<void(const std::vector<int>&)>& fn) const {
    std::vector<int> s(a.begin(), a.end());
    while (true) {
      fn(s);
      int i = size() - 1;
      while (i >= 0 && s[i] == d[i] - C[i] + 1) {
        s[i] = a[i];
        --i;
      }
      if (i < 0) return;
      ++s[i];
    }
  }

  bool is_nash(const std::vector<int>& s) const {
    for (int i = 0; i < size(); ++i) {
      const double here = payoff(i, s);
      auto alt = s;
      for (int x : actions(i)) {
        alt[i] = x;
        const double there = payoff(i, alt);
        if (there - here > 1e-12 * std::max(std::abs(here), std::abs(there))) return false;
      }
    }
    return true;
  }

  evcs::GameContext context() const {
    using namespace evcs;
    TimeGrid grid(T, slot_hours);
    std::vector<EvSpec> evs;
    for (int i = 0; i < size(); ++i) evs.push_back({i + 1, a[i], d[i], C[i]});
    TransformerParams params;
    params.thermal_time_constant_hours = tau_hours;
    CostConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.window_mode = common ? WindowMode::Common : WindowMode::Own;
    cfg.common_window = window;
    cfg.inertia_mode = memoryless ? InertiaMode::Memoryless : InertiaMode::WithInertia;
    if (!prices.empty()) {
      cfg.ev_cost_mode = EvCostMode::PriceSum;
      cfg.prices = {prices};
    }
    return GameContext{LoadProfile(grid, exo), LoadProfile(grid, ambient, Units::Celsius),
                       FleetSpec(grid, evs, P), params, cfg, std::nullopt};
  }
};

enum class Scenario { CommonWindow, OwnMemoryless, LossesWithInertia };

/// Random small game (I <= 4, T <= 6) of the requested potential scenario.
inline Game random_game(std::mt19937_64& rng, Scenario scenario) {
  std::uniform_int_distribution<int> Tdist(3, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Game g;
  g.T = Tdist(rng);
  const int I = std::uniform_int_distribution<int>(1, 4)(rng);
  g.P = 2.0 + 12.0 * u(rng);
  for (int t = 0; t < g.T; ++t) {
    g.exo.push_back(100.0 * u(rng));
    g.ambient.push_back(5.0 + 25.0 * u(rng));
  }
  for (int i = 0; i < I; ++i) {
    const int C = std::uniform_int_distribution<int>(1, g.T)(rng);
    const int a = std::uniform_int_distribution<int>(1, g.T - C + 1)(rng);
    const int d = std::uniform_int_distribution<int>(a + C - 1, g.T)(rng);
    g.a.push_back(a);
    g.d.push_back(d);
    g.C.push_back(C);
  }
  g.alpha = u(rng) < 0.3 ? (u(rng) < 0.5 ? 0.0 : 1.0) : u(rng);
  if (u(rng) < 0.5) {
    g.beta = 2.0 * u(rng);
    for (int t = 0; t < g.T; ++t) g.prices.push_back(u(rng));
  }
  switch (scenario) {
    case Scenario::CommonWindow:
      g.common = true;
      g.memoryless = u(rng) < 0.5;
      if (u(rng) < 0.5)
        for (int t = 1; t <= g.T; ++t)
          if (u(rng) < 0.6) g.window.push_back(t);
      break;
    case Scenario::OwnMemoryless:
      g.memoryless = true;
      break;
    case Scenario::LossesWithInertia:
      g.memoryless = false;
      g.alpha = 0.0;
      break;
  }
  g.tau_hours = 0.5 + 3.0 * u(rng);
  return g;
}

/// Brute-force minimizer of Σ cost(exo_t + p x_t) over x on the grid
/// {0, h, ..., 1}^4 with Σ x = energy (energy a multiple of h).
inline std::vector<double> grid_valley_fill(const std::vector<double>& exo, double p, double energy, double h,
                                            const std::function<double(double)>& cost) {
  const int steps = static_cast<int>(std::lround(1.0 / h));
  const int total = static_cast<int>(std::lround(energy / h));
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> arg(4, 0);
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      for (int k = 0; k <= steps; ++k) {
        const int l = total - i - j - k;
        if (l < 0 || l > steps) continue;
        const int xs[4] = {i, j, k, l};
        double c = 0.0;
        for (int t = 0; t < 4; ++t) c += cost(exo[t] + p * xs[t] * h);
        if (c < best) {
          best = c;
          arg = {i, j, k, l};
        }
      }
  std::vector<double> x(4);
  for (int t = 0; t < 4; ++t) x[t] = arg[t] * h;
  return x;
}

}  // namespace oracle
