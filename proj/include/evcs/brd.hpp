// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evcs/network_cost.hpp"
#include "evcs/random.hpp"

namespace evcs {

enum class UpdateOrder { FixedRoundRobin, StartTimeAscending };
enum class InitialSchedule { Arrival, Random, Given };

/// How a maximizer is picked when several starts tie.
enum class TieBreak {
  Uniform,       // uniform draw over the whole argmax set
  KeepCurrent,   // stay put when the current start is a maximizer, else uniform
};

struct BrdConfig {
  double tolerance = 0.0;  // δ on the L∞ start-time change
  int max_rounds = 100;    // M
  UpdateOrder order = UpdateOrder::FixedRoundRobin;
  std::uint64_t seed = 0;
  InitialSchedule initial = InitialSchedule::Arrival;
  ScheduleVector given;  // used with InitialSchedule::Given

  void validate() const;
};

/// One inner-loop update.
struct BrdStep {
  int round = 0;
  std::size_t ev = 0;
  int start = 0;
  double payoff = 0.0;
  std::optional<double> potential;
};

struct BrdResult {
  ScheduleVector schedule;
  int rounds_used = 0;            // rounds executed, including the confirming one
  int rounds_to_fixed_point = 0;  // first round m >= 1 whose schedule equals the final one
  bool converged = false;
  std::optional<PotentialKind> potential_kind;
  std::vector<double> potential_trajectory;           // initial value, then after each update
  std::vector<std::vector<double>> payoff_trajectories;  // [ev][k]: u_ev after the k-th update (k=0: initial)
  std::vector<BrdStep> steps;  // round 0 rows describe the initial schedule
};

/// Maximizer of u_i(·, s_{-i}) over EV i's action set.
int best_response(std::size_t ev_index, const ScheduleVector& s, const GameContext& ctx, Rng& rng,
                  TieBreak tie_break = TieBreak::Uniform);

/// L∞ norm of the start-time difference.
double schedule_change_norm(const ScheduleVector& prev, const ScheduleVector& next);

/// Sequential best-response dynamics. Updates keep the current start when it
/// is already a best response, so exact repetition (δ = 0) is reachable in
/// potential games.
BrdResult run_brd(const GameContext& ctx, const BrdConfig& config = {});

}  // namespace evcs
