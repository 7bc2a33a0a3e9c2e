#pragma once

// Fixed-step multiple-precision Taylor integration.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "periodica/mp.hpp"
#include "periodica/systems.hpp"

namespace periodica {

struct RunConfig {
  SystemSpec system;
  int order;
  PrecisionContext ctx;
  MpReal step;
  MpReal horizon;
  std::optional<State> initial;  // system default when empty

  /// Parses `step` at ctx and converts the exact horizon.
  static RunConfig make(SystemSpec system, int order, std::string_view step,
                        const BigTime& horizon, PrecisionContext ctx);

  State initial_state() const;
  void validate() const;
};

struct RunStats {
  std::uint64_t loops;
  MpReal max_abs_dh;
  State final_state;
};

/// Called after every step with the 1-based step index and the new state.
using Observer = std::function<void(std::uint64_t, const State&)>;

/// State at anchor.t + offset by Horner evaluation, highest order first.
/// Throws RangeError when offset lies outside [0, series.step].
State eval_series(const TaylorSeries& series, const MpReal& offset);

/// Full steps plus an optional partial step that exactly covers a horizon.
struct StepPlan {
  std::uint64_t full_steps;
  std::optional<MpReal> remainder;
};

/// horizon / step with snapping: quotients within 2^-(bits-16) relative of an
/// integer count as exact multiples, so decimal horizons like 10 over a step
/// of 0.01 do not produce a sliver step.
StepPlan plan_steps(const MpReal& horizon, const MpReal& step);

RunStats integrate(const RunConfig& config, const Observer& observer = {});

/// Smallest odd order M (1, 3, 5, ...) whose single step agrees with order
/// M + 10 to within tol and whose |dH| stays below tol for 100 steps.
int select_order(const SystemSpec& sys, const MpReal& step, const MpReal& tol,
                 const PrecisionContext& ctx, int max_order = 500);

/// Runs at orders M and M + delta; returns the agreed significant digits of
/// the final state (minimum over variables).
int self_verify(const RunConfig& config, int delta_order = 10);

}  // namespace periodica
