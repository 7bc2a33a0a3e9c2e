#pragma once

// Forward period analysis.
//
// Stage 1 steps the Taylor integrator on a fixed grid until the event
// variable returns across its base line in the direction it started moving,
// giving a bracket [k h0, (k+1) h0] and the series anchored at k h0.
// Stage 2 bisects the offset inside that single step, evaluating only the
// anchored polynomial, until the bracket is narrower than T 10^-digits.

#include <cstdint>

#include "periodica/mp.hpp"
#include "periodica/systems.hpp"

namespace periodica {

struct Bracket {
  MpReal lower;  // k h0
  MpReal upper;  // (k+1) h0
  std::uint64_t k;
  std::uint64_t loops;  // grid steps taken (k + 1)
  TaylorSeries anchor;  // expansion at `lower`, certified on [0, h0]
  EventSpec event;
};

struct PeriodResult {
  MpReal period;  // lower bracket edge after refinement
  MpReal width;   // upper - lower; the period lies in [period, period+width]
  int verified_digits;
  std::uint64_t loops_stage1;
  std::uint64_t loops_stage2;
};

/// Stage 1. Throws NotFoundError when no return happens within max_steps and
/// ConfigError when the system has no event.
Bracket bracket_period(const SystemSpec& sys, const MpReal& h0, int order,
                       const PrecisionContext& ctx, std::uint64_t max_steps);

/// Stage 2. verified_digits is left at target_digits; `period` fills in the
/// cross-checked value. Throws PrecisionError when ctx cannot resolve the
/// requested width.
PeriodResult refine_period(const Bracket& bracket, int target_digits,
                           const PrecisionContext& ctx);

/// Extra decades `period` refines beyond the request so that the truncated
/// printout cannot lose its last digit to the bracket width.
inline constexpr int kGuardDigits = 2;

struct PeriodOptions {
  std::uint64_t max_steps = 1'000'000;
  int verify_order_delta = 10;
  long verify_extra_bits = 64;
};

/// Stage-1 brackets from two independent runs: the requested configuration
/// and a check run at order + 10 and bits + 64.
struct CheckedBracket {
  Bracket primary;
  Bracket check;
};

CheckedBracket bracket_with_check(const SystemSpec& sys, const MpReal& h0,
                                  int order, const PrecisionContext& ctx,
                                  const PeriodOptions& options = {});

/// Refines both brackets (plus guard digits); verified_digits is the number
/// of leading digits the two runs agree on, capped at target_digits.
PeriodResult refine_checked(const CheckedBracket& brackets, int target_digits);

/// bracket_with_check followed by refine_checked.
PeriodResult period(const SystemSpec& sys, const MpReal& h0, int order,
                    int target_digits, const PrecisionContext& ctx,
                    const PeriodOptions& options = {});

/// A period given as decimal text, with width one unit in its last digit.
PeriodResult period_from_decimal(std::string_view text,
                                 const PrecisionContext& ctx);

/// dt ~ E_x / sigma(p), sigma(p) being the RMS of the momentum sampled at
/// the grid points of one period. Throws DegenerateError when sigma(p) = 0.
MpReal period_uncertainty(const MpReal& position_error, const SystemSpec& sys,
                          const PeriodResult& result, const MpReal& step,
                          int order, const PrecisionContext& ctx);

/// RMS of the momentum over one period on the integration grid.
MpReal momentum_rms(const SystemSpec& sys, const PeriodResult& result,
                    const MpReal& step, int order, const PrecisionContext& ctx);

}  // namespace periodica
