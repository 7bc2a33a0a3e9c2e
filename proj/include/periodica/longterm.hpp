#pragma once

// State at huge times by period reduction: t = k T + T_r with k an exact
// integer, then integration over the residual T_r only.
//
// A period with relative error eps shifts T_r by about k T eps ~ t eps, so
// an output error E at time t is only reachable when eps < E / t.

#include <string_view>

#include "periodica/fpa.hpp"
#include "periodica/mp.hpp"
#include "periodica/systems.hpp"

namespace periodica {

struct TimeReduction {
  mpz_class k;
  MpReal residual;       // T_r in [0, T)
  MpReal epsilon_bound;  // relative period error width / T
  bool admissible;
};

/// Significant digits a period needs for output error `target_error` at t.
int required_period_digits(const BigTime& t, const MpReal& target_error);

/// Throws InadmissibleError (carrying k) when width/T >= target_error/t and
/// PrecisionError when ctx is narrower than required_bits(t, digits(E)).
TimeReduction reduce_time(const BigTime& t, const PeriodResult& period,
                          const MpReal& target_error,
                          const PrecisionContext& ctx);

struct EvaluationConfig {
  int order;
  MpReal step;
  PrecisionContext ctx;  // residual integration precision
  MpReal target_error;
  int verify_order_delta = 10;

  /// Order and step of the period extraction; bits sized for the output.
  static EvaluationConfig defaults(int order, std::string_view step,
                                   const MpReal& period,
                                   std::string_view target_error = "1e-16");
};

struct Evaluation {
  TimeReduction reduction;
  State state;  // state.t holds the residual time actually integrated
  int verified_digits;
};

Evaluation evaluate_at(const SystemSpec& sys, const BigTime& t,
                       const PeriodResult& period,
                       const EvaluationConfig& config);

/// 2 pi truncated to `digits` significant digits, from the bundled constant.
BigTime two_pi_truncated(int digits);

/// sin(t) by exact reduction modulo a truncated 2 pi followed by a Taylor
/// sum on the residual. Independent of the integrator; throws
/// InadmissibleError when pi_digits cannot give 1e-16 at t.
MpReal harmonic_reference(const BigTime& t, int pi_digits);

}  // namespace periodica
