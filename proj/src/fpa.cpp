#include "periodica/fpa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "periodica/errors.hpp"
#include "periodica/taylor.hpp"

namespace periodica {

namespace {

// Strictly on the side the event variable occupies before a return.
bool before_crossing(const EventSpec& event, const MpReal& value) {
  return event.direction < 0 ? value > event.base : value < event.base;
}

double approx_log10(const MpReal& x) {
  return std::log10(std::abs(x.to_double()));
}

}  // namespace

Bracket bracket_period(const SystemSpec& sys, const MpReal& h0, int order,
                       const PrecisionContext& ctx, std::uint64_t max_steps) {
  const std::optional<EventSpec> event = sys.event(ctx);
  if (!event) {
    throw ConfigError("system " + std::string(sys.name()) +
                      " has no period-return event");
  }
  if (!h0.is_finite() || h0.sign() <= 0) {
    throw ConfigError("grid step must be positive");
  }
  const MpReal step(h0, ctx);
  const State ic = sys.initial_state(ctx);
  TaylorSeries series = coefficients(sys, ic, order, step, ctx);
  bool previous_before = before_crossing(*event, ic.vars[event->var]);

  for (std::uint64_t k = 0; k < max_steps; ++k) {
    State next = eval_series(series, step);
    if (!std::all_of(next.vars.begin(), next.vars.end(),
                     [](const MpReal& v) { return v.is_finite(); })) {
      throw IntegrationError("state became non-finite while bracketing",
                             k + 1);
    }
    const bool now_before = before_crossing(*event, next.vars[event->var]);
    if (previous_before && !now_before) {
      MpReal lower(ctx);
      mpfr_mul_ui(lower.raw(), step.raw(), k, MPFR_RNDN);
      MpReal upper(ctx);
      mpfr_mul_ui(upper.raw(), step.raw(), k + 1, MPFR_RNDN);
      return Bracket{std::move(lower), std::move(upper), k, k + 1,
                     std::move(series), *event};
    }
    previous_before = now_before;
    mpfr_mul_ui(next.t.raw(), step.raw(), k + 1, MPFR_RNDN);
    recompute_coefficients(sys, series, next.t, next.vars);
  }
  throw NotFoundError("no return of " + sys.var_names()[event->var] +
                      " within " + std::to_string(max_steps) +
                      " steps; the system may not be periodic or max_steps "
                      "is too small");
}

PeriodResult refine_period(const Bracket& bracket, int target_digits,
                           const PrecisionContext& ctx) {
  if (target_digits < 1) throw ConfigError("target digits must be >= 1");
  const long needed =
      required_bits_for_log10(approx_log10(bracket.upper), target_digits);
  if (ctx.bits() < needed) {
    throw PrecisionError(std::to_string(target_digits) + " digits need " +
                         std::to_string(needed) + " bits, context has " +
                         std::to_string(ctx.bits()));
  }
  const MpReal& h0 = bracket.anchor.step;
  const MpReal& scale = bracket.lower.is_zero() ? bracket.upper : bracket.lower;
  MpReal threshold = scale;
  {
    MpReal ten_power(ctx);
    mpfr_ui_pow_ui(ten_power.raw(), 10,
                   static_cast<unsigned long>(target_digits), MPFR_RNDN);
    threshold /= ten_power;
  }

  // Offsets are h0 * j / 2^n with exact integer bookkeeping, so the width
  // after n halvings is exactly h0 * 2^-n.
  mpz_class low = 0;
  mpz_class high = 1;
  long halvings = 0;
  MpReal width(h0, ctx);
  MpReal low_offset(ctx);
  std::uint64_t loops = 0;
  const auto offset_of = [&](const mpz_class& j, long n) {
    MpReal out = MpReal::from_integer(j, ctx) * h0;
    mpfr_div_2ui(out.raw(), out.raw(), static_cast<unsigned long>(n),
                 MPFR_RNDN);
    return out;
  };

  while (width > threshold) {
    low *= 2;
    high *= 2;
    ++halvings;
    const mpz_class mid = low + 1;
    const MpReal mid_offset = offset_of(mid, halvings);
    if (mid_offset <= low_offset || mid_offset >= offset_of(high, halvings)) {
      throw PrecisionError("precision exhausted after " +
                           std::to_string(loops) + " bisections");
    }
    const State probe = eval_series(bracket.anchor, mid_offset);
    if (before_crossing(bracket.event, probe.vars[bracket.event.var])) {
      low = mid;
      low_offset = mid_offset;
    } else {
      high = mid;
    }
    mpfr_div_2ui(width.raw(), width.raw(), 1, MPFR_RNDN);
    ++loops;
  }
  return PeriodResult{bracket.lower + low_offset, std::move(width),
                      target_digits, bracket.loops, loops};
}

CheckedBracket bracket_with_check(const SystemSpec& sys, const MpReal& h0,
                                  int order, const PrecisionContext& ctx,
                                  const PeriodOptions& options) {
  const PrecisionContext check_ctx = ctx.widened(options.verify_extra_bits);
  Bracket primary = bracket_period(sys, h0, order, ctx, options.max_steps);
  Bracket check =
      bracket_period(sys, MpReal(h0, check_ctx),
                     order + options.verify_order_delta, check_ctx,
                     options.max_steps);
  return CheckedBracket{std::move(primary), std::move(check)};
}

PeriodResult refine_checked(const CheckedBracket& brackets,
                            int target_digits) {
  const int internal_digits = target_digits + kGuardDigits;
  const auto context_of = [](const Bracket& b) {
    return PrecisionContext(b.anchor.coeffs[0][0].precision());
  };
  PeriodResult result = refine_period(brackets.primary, internal_digits,
                                      context_of(brackets.primary));
  const PeriodResult check = refine_period(brackets.check, internal_digits,
                                           context_of(brackets.check));
  result.verified_digits =
      std::min(target_digits, agreed_digits(result.period, check.period));
  return result;
}

PeriodResult period(const SystemSpec& sys, const MpReal& h0, int order,
                    int target_digits, const PrecisionContext& ctx,
                    const PeriodOptions& options) {
  return refine_checked(bracket_with_check(sys, h0, order, ctx, options),
                        target_digits);
}

PeriodResult period_from_decimal(std::string_view text,
                                 const PrecisionContext& ctx) {
  MpReal value = MpReal::parse(text, ctx);
  if (value.sign() <= 0) throw ConfigError("period must be positive");
  long fraction = 0;
  int significant = 0;
  bool after_point = false;
  bool leading = true;
  long exponent = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      after_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      if (after_point) ++fraction;
      if (c != '0') leading = false;
      if (!leading) ++significant;
    } else if (c == 'e' || c == 'E') {
      exponent = std::stol(std::string(text.substr(i + 1)));
      break;
    }
  }
  MpReal width(ctx);
  mpfr_set_ui(width.raw(), 10, MPFR_RNDN);
  MpReal power(exponent - fraction, ctx);
  mpfr_pow(width.raw(), width.raw(), power.raw(), MPFR_RNDN);
  return PeriodResult{std::move(value), std::move(width), significant, 0, 0};
}

MpReal momentum_rms(const SystemSpec& sys, const PeriodResult& result,
                    const MpReal& step, int order,
                    const PrecisionContext& ctx) {
  const MpReal h(step, ctx);
  const StepPlan plan = plan_steps(MpReal(result.period, ctx), h);
  const std::uint64_t samples = std::max<std::uint64_t>(plan.full_steps, 1);
  const std::size_t p = sys.momentum_index();

  const State ic = sys.initial_state(ctx);
  MpReal sum = ic.vars[p] * ic.vars[p];
  MpReal horizon(ctx);
  mpfr_mul_ui(horizon.raw(), h.raw(), samples - 1, MPFR_RNDN);
  RunConfig run{sys, order, ctx, h, std::move(horizon), ic};
  integrate(run, [&](std::uint64_t, const State& s) {
    sum += s.vars[p] * s.vars[p];
  });
  return sqrt(sum / static_cast<long>(samples));
}

MpReal period_uncertainty(const MpReal& position_error, const SystemSpec& sys,
                          const PeriodResult& result, const MpReal& step,
                          int order, const PrecisionContext& ctx) {
  if (!position_error.is_finite() || position_error.sign() < 0) {
    throw ConfigError("position error must be nonnegative");
  }
  const MpReal sigma = momentum_rms(sys, result, step, order, ctx);
  if (sigma.is_zero()) {
    throw DegenerateError("momentum RMS over one period is zero");
  }
  return MpReal(position_error, ctx) / sigma;
}

}  // namespace periodica
