// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "../oracles.hpp"
#include "evcs/baselines.hpp"
#include "evcs/brd.hpp"
#include "evcs/cli.hpp"
#include "evcs/equilibrium.hpp"
#include "evcs/experiments.hpp"
#include "evcs/mobility.hpp"
#include "evcs/network_cost.hpp"
#include "evcs/thermal.hpp"

using namespace evcs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

GameContext symmetric_game(std::vector<double> exo, int I, int C, double alpha, WindowMode window, double power) {
  const int T = static_cast<int>(exo.size());
  TimeGrid g(T, 0.5);
  TransformerParams params;
  params.thermal_time_constant_hours = 0.5;
  CostConfig cfg;
  cfg.alpha = alpha;
  cfg.window_mode = window;
  cfg.inertia_mode = InertiaMode::Memoryless;
  return GameContext{LoadProfile(g, std::move(exo)), LoadProfile::constant(g, 20.0, Units::Celsius),
                     symmetric_fleet(g, I, power, 1, T, C), params, cfg, std::nullopt};
}

// 1. Sign of every unilateral payoff change equals the sign of the potential change.
Outcome ordinal_potential() {
  std::mt19937_64 rng(2024);
  const oracle::Scenario scenarios[] = {oracle::Scenario::CommonWindow, oracle::Scenario::OwnMemoryless,
                                        oracle::Scenario::LossesWithInertia};
  long deviations = 0, violations = 0;
  int instances = 0;
  for (auto scenario : scenarios) {
    for (int n = 0; n < 60; ++n, ++instances) {
      const auto g = oracle::random_game(rng, scenario);
      const auto ctx = g.context();
      const auto kind = applicable_potential(ctx.config);
      if (!kind) return {false, "no potential for a scenario instance"};
      g.for_each_schedule([&](const std::vector<int>& base) {
        const ScheduleVector s{base};
        const double phi = potential(*kind, s, ctx);
        for (int i = 0; i < g.size(); ++i) {
          const double u = payoff(i, s, ctx);
          for (int x : g.actions(i)) {
            if (x == base[i]) continue;
            ScheduleVector t = s;
            t.starts[i] = x;
            const double u2 = payoff(i, t, ctx);
            const double phi2 = potential(*kind, t, ctx);
            const int su = tolerant_sign(u2 - u, std::max(std::abs(u), std::abs(u2)));
            const int sp = tolerant_sign(phi2 - phi, std::max(std::abs(phi), std::abs(phi2)));
            ++deviations;
            if (su != sp) ++violations;
          }
        }
      });
    }
  }
  return {violations == 0, std::to_string(instances) + " instances, " + std::to_string(deviations) + " deviations, " +
                               std::to_string(violations) + " violations"};
}

// 2. BRD with δ = 0 reaches a Nash fixed point along a non-decreasing potential.
Outcome brd_convergence() {
  std::mt19937_64 rng(77);
  const oracle::Scenario scenarios[] = {oracle::Scenario::CommonWindow, oracle::Scenario::OwnMemoryless,
                                        oracle::Scenario::LossesWithInertia};
  int runs = 0, converged = 0, nash = 0, monotone = 0;
  for (int trial = 0; trial < 240; ++trial) {
    const auto g = oracle::random_game(rng, scenarios[trial % 3]);
    const auto ctx = g.context();
    BrdConfig cfg;
    cfg.tolerance = 0.0;
    cfg.initial = InitialSchedule::Random;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto r = run_brd(ctx, cfg);
    ++runs;
    converged += r.converged;
    nash += r.converged && g.is_nash(r.schedule.starts) && is_nash(r.schedule, ctx);
    bool up = !r.potential_trajectory.empty();
    const auto& phi = r.potential_trajectory;
    for (std::size_t k = 1; k < phi.size(); ++k)
      if (tolerant_sign(phi[k] - phi[k - 1], std::max(std::abs(phi[k]), std::abs(phi[k - 1]))) < 0) up = false;
    monotone += up;
  }
  const bool ok = converged == runs && nash == runs && monotone == runs;
  return {ok, std::to_string(runs) + " runs: converged " + std::to_string(converged) + ", Nash " +
                  std::to_string(nash) + ", monotone " + std::to_string(monotone)};
}

// 3. The three named equilibria of the small valley instance.
Outcome multiple_equilibria() {
  const auto ctx = symmetric_game({1, 2, 3, 2, 1}, 3, 2, 1.0, WindowMode::Own, 1.0);
  int ok = 0;
  for (const auto& s : {ScheduleVector{{1, 1, 4}}, ScheduleVector{{1, 4, 1}}, ScheduleVector{{4, 1, 1}}}) {
    BrdConfig cfg;
    cfg.tolerance = 0.0;
    cfg.initial = InitialSchedule::Given;
    cfg.given = s;
    const auto r = run_brd(ctx, cfg);
    ok += is_nash(s, ctx) && r.converged && r.schedule == s && r.rounds_to_fixed_point == 1;
  }
  return {ok == 3, std::to_string(ok) + "/3 schedules are Nash fixed points"};
}

// 4. Worst-case PoD on empty demand and the flat-demand degenerate case.
Outcome pod_bound() {
  double worst = 0.0;
  std::string per_t;
  for (int T = 3; T <= 8; ++T) {
    const auto r = enumerate_equilibria(symmetric_game(std::vector<double>(T, 0.0), 4, 2, 0.0, WindowMode::Common, 3.0),
                                        100'000'000, jobs());
    worst = std::max(worst, r.pod);
    per_t += " T=" + std::to_string(T) + ":" + fmt("%.4f", r.pod);
  }
  double flat_max = 0.0;
  // Same fleet on flat demand, over the horizons where an even spread is forced.
  for (int T = 3; T <= 7; ++T) {
    const auto r = enumerate_equilibria(symmetric_game(std::vector<double>(T, 10.0), 4, 2, 0.0, WindowMode::Common, 3.0),
                                        100'000'000, jobs());
    flat_max = std::max(flat_max, std::abs(r.pod));
  }
  const bool ok = worst <= 0.20 + 1e-12 && flat_max <= 1e-12;
  return {ok, "max PoD (I=4, C=2, empty demand)" + per_t + "; flat-demand |PoD| " + fmt("%.2e", flat_max)};
}

// 5. Water filling against a brute-force grid under two convex costs.
Outcome valley_fill() {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 0.01;
  double worst_grid = 0.0, worst_structure = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> exo(4);
    for (auto& e : exo) e = 3.0 * u(rng);
    const double p = 0.5 + 2.0 * u(rng);
    const double energy = h * std::uniform_int_distribution<int>(20, 380)(rng);
    const auto vf = valley_fill_exact(exo, energy, p, 0.0, 1.0);
    const auto quad = oracle::grid_valley_fill(exo, p, energy, h, [](double l) { return l * l; });
    const auto expo = oracle::grid_valley_fill(exo, p, energy, h, [](double l) { return std::exp(l); });
    double sum = 0.0;
    for (int t = 0; t < 4; ++t) {
      worst_grid = std::max({worst_grid, std::abs(vf.x[t] - quad[t]), std::abs(vf.x[t] - expo[t])});
      sum += vf.x[t];
      const double load = exo[t] + p * vf.x[t];
      if (vf.x[t] > 1e-12 && vf.x[t] < 1.0 - 1e-12)
        worst_structure = std::max(worst_structure, std::abs(load - vf.level) / std::max(1.0, vf.level));
      if (vf.x[t] <= 1e-12) worst_structure = std::max(worst_structure, (vf.level - exo[t]) / std::max(1.0, vf.level));
      if (vf.x[t] >= 1.0 - 1e-12)
        worst_structure = std::max(worst_structure, (load - vf.level) / std::max(1.0, vf.level));
    }
    worst_structure = std::max(worst_structure, std::abs(sum - energy) / energy);
  }
  const bool ok = worst_grid <= h + 1e-9 && worst_structure <= 1e-9;
  return {ok, fmt("max |x - grid| %.4f (bound %.2f), structure residual %.2e", worst_grid, h, worst_structure)};
}

// 6. Thermal calibration, rated-load hot spot and the nominal aging point.
Outcome thermal_sanity() {
  SyntheticWorldConfig cfg;
  cfg.days = 365;
  const World world = make_world(cfg);
  const auto trace = hotspot_with_inertia(world.exo_profile(), world.ambient_profile(), world.params);
  const double life = lifetime_years(trace.aging);
  SimulationSetup setup;
  setup.fleet_size = 1;
  const double sim_life = simulate_policy(world, Policy::NoEV, setup, 1).lifetime_years;

  TransformerParams params;
  bool rated_exact = true;
  for (double amb : {-5.0, 0.0, 20.0, 31.5})
    rated_exact = rated_exact && memoryless_hotspot(params.rated_power_kw, amb, params) == amb + 78.0;
  const double nominal = -params.aging_coeff_b / params.aging_coeff_a;
  const double a = aging_factor(nominal, params);
  const bool ok = std::abs(life - 40.0) <= 0.01 && std::abs(sim_life - 40.0) <= 0.01 && rated_exact &&
                  std::abs(a - 1.0) <= 1e-9;
  return {ok, fmt("lifetime %.6f y (simulated %.6f y), A(%.4f) = %.12f", life, sim_life, nominal, a) +
                  (rated_exact ? ", rated hot spot = ambient + 78" : ", rated hot spot mismatch")};
}

const World& month_world() {
  static const World world = make_world(SyntheticWorldConfig{});
  return world;
}

// 7. Lifetime ordering under forecast noise.
Outcome robustness() {
  LifetimeStudy study;
  study.policies = {Policy::PlugAndCharge, Policy::Brd, Policy::GanStyle, Policy::ShinwariStyle};
  study.fleet_sizes = {10};
  study.fsnr_db = {4.0, 40.0};
  const auto r = lifetime_vs_fleet(month_world(), study, {100, 7, jobs()});
  auto med = [&](const char* policy, double fsnr) {
    return r.find(policy, "lifetime_years", {{"fsnr_db", fsnr}, {"fleet_size", 10}})->value.median;
  };
  const double brd4 = med("BRD", 4.0), gan4 = med("GanStyle", 4.0), shin4 = med("ShinwariStyle", 4.0);
  const double brd40 = med("BRD", 40.0), gan40 = med("GanStyle", 40.0), pac40 = med("PaC", 40.0);
  const bool noisy = brd4 > gan4 && brd4 > shin4;
  const double gap = std::abs(brd40 - gan40) / gan40;
  const bool clean = gap <= 0.05 && brd40 > pac40 && gan40 > pac40;
  return {noisy && clean, fmt("4 dB: BRD %.2f, Gan %.2f, Shinwari %.2f;", brd4, gan4, shin4) +
                              fmt(" 40 dB: BRD %.2f, Gan %.2f, PaC %.2f, gap %.4f", brd40, gan40, pac40, gap)};
}

// 8. Argmax charging power at both noise extremes.
Outcome optimal_power() {
  PowerStudy study;
  const auto r = optimal_power_search(month_world(), study, {20, 8, jobs()});
  std::string detail;
  bool ok = true;
  for (int I : study.fleet_sizes) {
    for (double fsnr : study.fsnr_db) {
      const double p = r.find("BRD", "optimal_power_kw", {{"fsnr_db", fsnr}, {"fleet_size", I}})->value.median;
      const double want = std::isinf(fsnr) ? 24.0 : 2.2;
      ok = ok && p == want;
      detail += " I=" + std::to_string(I) + (std::isinf(fsnr) ? " inf dB: " : " -10 dB: ") + fmt("%g kW", p) +
                fmt(" (want %g);", want);
    }
  }
  return {ok, detail.substr(1)};
}

// 9. Normalized losses: PaC above every scheduled policy, scheduled policies within 3%.
Outcome losses_ordering() {
  LifetimeStudy study;
  study.policies = {Policy::PlugAndCharge, Policy::Brd, Policy::GanStyle, Policy::ShinwariStyle};
  study.fsnr_db = {kNoNoise};
  const auto r = lifetime_vs_fleet(month_world(), study, {20, 9, jobs()});
  bool ok = true;
  std::string detail;
  for (int I : study.fleet_sizes) {
    auto med = [&](const char* policy) {
      return r.find(policy, "normalized_losses", {{"fsnr_db", kNoNoise}, {"fleet_size", I}})->value.median;
    };
    const double pac = med("PaC"), brd = med("BRD"), gan = med("GanStyle"), shin = med("ShinwariStyle");
    const double lo = std::min({brd, gan, shin}), hi = std::max({brd, gan, shin});
    ok = ok && pac > hi && (hi - lo) / lo <= 0.03;
    detail += " I=" + std::to_string(I) + fmt(": PaC %.4f BRD %.4f Gan %.4f Shinwari %.4f;", pac, brd, gan, shin);
  }
  return {ok, detail.substr(1)};
}

// 10. Repeated CLI runs produce identical bytes.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("evcs_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream(dir / "exo.csv") << "slot,value\n1,40\n2,55\n3,70\n4,52\n5,30\n6,25\n7,35\n8,45\n";
    std::ofstream(dir / "fleet.csv") << "id,arrival,departure,duration\n1,1,8,3\n2,2,7,2\n3,1,6,4\n";
  }
  const std::string exo = (dir / "exo.csv").string(), fleet = (dir / "fleet.csv").string();
  const std::vector<std::vector<std::string>> commands{
      {"schedule", "--exo", exo, "--fleet", fleet, "--initial", "random", "--seed", "13"},
      {"schedule", "--exo", exo, "--fleet", fleet, "--format", "json", "--seed", "13"},
      {"baseline", "--policy", "GanStyle", "--exo", exo, "--fleet", fleet},
      {"baseline", "--policy", "ShinwariStyle", "--exo", exo, "--fleet", fleet, "--format", "json"},
      {"enumerate", "--exo", exo, "--fleet", fleet},
      {"calibrate", "--days", "3"},
      {"experiment", "--study", "lifetime", "--days", "2", "--replicates", "3", "--fleet-sizes", "4", "--fsnr", "4",
       "--seed", "21", "--jobs", "3"},
      {"experiment", "--study", "convergence", "--replicates", "5", "--fleet-sizes", "2,3", "--format", "json"},
  };
  auto snapshot = [&](const std::vector<std::string>& cmd, const std::string& tag, int& code) {
    const fs::path out = dir / tag;
    fs::remove_all(out);
    auto args = cmd;
    args.insert(args.end(), {"--out", out.string()});
    std::ostringstream so, se;
    code = run_cli(args, so, se);
    std::string bytes = so.str();
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(out)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      bytes += "\n--" + f.filename().string() + "--\n" + std::string(std::istreambuf_iterator<char>(in), {});
    }
    return bytes;
  };
  int identical = 0, ok_codes = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    int c1 = -1, c2 = -1;
    const auto a = snapshot(commands[k], "a" + std::to_string(k), c1);
    const auto b = snapshot(commands[k], "b" + std::to_string(k), c2);
    identical += a == b;
    ok_codes += c1 == 0 && c2 == 0;
  }
  fs::remove_all(dir);
  const int n = static_cast<int>(commands.size());
  return {identical == n && ok_codes == n, std::to_string(identical) + "/" + std::to_string(n) +
                                               " invocations byte-identical, " + std::to_string(ok_codes) + "/" +
                                               std::to_string(n) + " exited 0"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"ordinal potential sign equivalence", ordinal_potential},
      {"BRD convergence to Nash fixed points", brd_convergence},
      {"multiple equilibria on the valley instance", multiple_equilibria},
      {"price of decentralization bound", pod_bound},
      {"valley filling vs brute force", valley_fill},
      {"thermal sanity", thermal_sanity},
      {"robustness ordering under forecast noise", robustness},
      {"optimal power endpoints", optimal_power},
      {"losses ordering", losses_ordering},
      {"CLI determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("criterion %2d %s: %s [%.1f s] %s\n", index, o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
