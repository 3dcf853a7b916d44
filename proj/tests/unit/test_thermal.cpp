// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "../oracles.hpp"
#include "evcs/errors.hpp"
#include "evcs/thermal.hpp"

using namespace evcs;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = std::uniform_real_distribution<double>(lo, hi)(rng);
  return v;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("memoryless hot-spot at rated load") {
  TransformerParams p;
  CHECK(memoryless_hotspot(90.0, 20.0, p) == doctest::Approx(98.0).epsilon(1e-15));
  CHECK(memoryless_hotspot(90.0, -3.5, p) == doctest::Approx(74.5).epsilon(1e-15));
  // No load: only the no-load share of the top-oil rise remains.
  CHECK(memoryless_hotspot(0.0, 20.0, p) == doctest::Approx(20.0 + 55.0 / 6.5));
}

TEST_CASE("aging factor") {
  TransformerParams p;
  CHECK(aging_factor(11.0 / 0.12, p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(aging_factor(98.0, p) == doctest::Approx(std::exp(0.12 * 98.0 - 11.0)));
  CHECK(aging_factor(98.0, p) > aging_factor(97.9, p));
  CHECK(aging_factor(-40.0, p) > 0.0);
  AgingDiagnostics diag;
  const std::vector<double> hot{100.0, 350.0, 400.0};
  const auto a = aging_factor(hot, p, &diag);
  CHECK(diag.saturated_slots == 2);
  CHECK(a[2] > a[1]);
}

TEST_CASE("lifetime") {
  CHECK(lifetime_years(std::vector<double>(10, 1.0)) == doctest::Approx(40.0));
  CHECK(lifetime_years(std::vector<double>{2.0, 2.0}) == doctest::Approx(20.0));
  CHECK_THROWS_AS(lifetime_years(std::vector<double>{}), DomainError);
}

TEST_CASE("inertial model matches the oracle and starts at the initial temperature") {
  std::mt19937_64 rng(3);
  TransformerParams p;
  for (int trial = 0; trial < 50; ++trial) {
    const auto load = random_vector(rng, 24, 0.0, 150.0);
    const auto amb = random_vector(rng, 24, -5.0, 35.0);
    p.thermal_time_constant_hours = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
    const auto trace = hotspot_with_inertia(load, amb, 0.5, p);
    const auto ref = oracle::hotspot_inertial(load, amb, 0.5, p.thermal_time_constant_hours);
    for (int t = 0; t < 24; ++t) CHECK(trace.hotspot_c[t] == doctest::Approx(ref[t]).epsilon(1e-12));
  }
  // Steady rated load and rated ambient stays at 98 degC from slot 1 on.
  const auto trace = hotspot_with_inertia(std::vector<double>(8, 90.0), std::vector<double>(8, 20.0), 0.5, p);
  for (double h : trace.hotspot_c) CHECK(h == doctest::Approx(98.0).epsilon(1e-12));
}

TEST_CASE("top-oil lag decays geometrically after a step") {
  TransformerParams p;
  p.thermal_time_constant_hours = 2.0;
  std::vector<double> load(12, 0.0);
  const std::vector<double> amb(12, 20.0);
  const auto trace = hotspot_with_inertia(load, amb, 0.5, p);
  const double steady = 55.0 / 6.5;
  for (int t = 1; t < 12; ++t) {
    const double ratio = (trace.top_oil_rise_c[t] - steady) / (trace.top_oil_rise_c[t - 1] - steady);
    CHECK(ratio == doctest::Approx(1.0 - 0.5 / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("property: causality, memoryless limit, monotonicity") {
  std::mt19937_64 rng(17);
  TransformerParams p;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 16;
    const auto load = random_vector(rng, n, 0.0, 140.0);
    const auto amb = random_vector(rng, n, -10.0, 35.0);
    const auto full = hotspot_with_inertia(load, amb, 0.5, p);

    const int cut = std::uniform_int_distribution<int>(1, n)(rng);
    const std::vector<double> lt(load.begin(), load.begin() + cut), at(amb.begin(), amb.begin() + cut);
    const auto part = hotspot_with_inertia(lt, at, 0.5, p);
    for (int t = 0; t < cut; ++t) CHECK(part.hotspot_c[t] == full.hotspot_c[t]);

    TransformerParams fast = p;
    fast.thermal_time_constant_hours = 0.5;
    const auto inertial = hotspot_with_inertia(load, amb, 0.5, fast);
    const auto memoryless = hotspot_memoryless(load, amb, fast);
    for (int t = 0; t < n; ++t) CHECK(inertial.hotspot_c[t] == doctest::Approx(memoryless.hotspot_c[t]).epsilon(1e-12));

    // Raising one slot's load never cools that slot or any later one.
    const int bump = std::uniform_int_distribution<int>(1, n - 1)(rng);
    auto raised = load;
    raised[bump] += std::uniform_real_distribution<double>(0.1, 40.0)(rng);
    const auto hot = hotspot_with_inertia(raised, amb, 0.5, p);
    for (int t = bump; t < n; ++t) CHECK(hot.hotspot_c[t] >= full.hotspot_c[t]);
    CHECK(hot.hotspot_c[bump] > full.hotspot_c[bump]);
  }
}

TEST_CASE("input checks") {
  TransformerParams p;
  CHECK_THROWS_AS(hotspot_with_inertia(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 0.5, p),
                  DimensionError);
  CHECK_THROWS_AS(hotspot_with_inertia(std::vector<double>{-1.0}, std::vector<double>{1.0}, 0.5, p), DomainError);
  p.thermal_time_constant_hours = 0.25;
  CHECK_THROWS_AS(hotspot_with_inertia(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.5, p), DomainError);
  TransformerParams bad;
  bad.aging_coeff_b = 1.0;
  CHECK_THROWS_AS(hotspot_memoryless(std::vector<double>{1.0}, std::vector<double>{1.0}, bad), DomainError);
}

TEST_CASE("calibration") {
  TransformerParams p;
  TimeGrid g(48, 0.5);
  std::mt19937_64 rng(9);
  const LoadProfile shape(g, random_vector(rng, 48, 0.2, 1.0));
  const LoadProfile amb(g, random_vector(rng, 48, 5.0, 25.0), Units::Celsius);
  const double kappa = calibrate_exogenous_scale(shape, amb, p, 1e4);
  auto mean_aging = [&](double k) { return mean(hotspot_with_inertia(shape.scaled(k), amb, p).aging); };
  CHECK(mean_aging(kappa) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mean_aging(2.0 * kappa) > 1.0);

  // A profile already at mean aging 1 needs no rescaling.
  const LoadProfile calibrated = shape.scaled(kappa);
  CHECK(calibrate_exogenous_scale(calibrated, amb, p, 1e4) == doctest::Approx(1.0).epsilon(1e-6));

  // Flat load and flat ambient: solve 0.12 (amb + 55 (1 + 5.5 k^2)/6.5 + 23 k^2) - 11 = 0 for k,
  // starting from the steady state so the lag is inactive.
  p.initial_hotspot_c = 0.0;  // overwritten below
  const double ambient = 20.0;
  const double k2 = (11.0 / 0.12 - ambient - 55.0 / 6.5) / (55.0 * 5.5 / 6.5 + 23.0);
  const double load_kw = 90.0 * std::sqrt(k2);
  p.initial_hotspot_c = 11.0 / 0.12;
  const LoadProfile flat = LoadProfile::constant(g, 1.0);
  const LoadProfile flat_amb = LoadProfile::constant(g, ambient, Units::Celsius);
  CHECK(calibrate_exogenous_scale(flat, flat_amb, p, 1e4) == doctest::Approx(load_kw).epsilon(1e-9));

  CHECK_THROWS_AS(calibrate_exogenous_scale(flat, flat_amb, p, 1.0), CalibrationError);
  const LoadProfile hot_amb = LoadProfile::constant(g, 120.0, Units::Celsius);
  CHECK_THROWS_AS(calibrate_exogenous_scale(flat, hot_amb, p, 1e4), CalibrationError);
}
