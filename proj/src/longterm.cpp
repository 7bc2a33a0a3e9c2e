#include "periodica/longterm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "periodica/errors.hpp"
#include "periodica/taylor.hpp"

namespace periodica {

namespace {

// Digits of pi; data, not computed.
constexpr std::string_view kPiDigits =
    "3.141592653589793238462643383279502884197169399375105820974944592307816406"
    "28620899862803482534211706798214808651328230664709384460955058223172535940"
    "81284811174502841027019385211055596446229489549303819644288109756659334461";

constexpr long kReferenceBits = 320;

double log10_of(const MpReal& x) {
  MpReal l = log10(abs(x));
  return l.to_double();
}

int decimal_digits_of(const MpReal& error) {
  return std::max(1, static_cast<int>(std::ceil(-log10_of(error) - 1e-9)));
}

MpReal sine_series(const MpReal& x) {
  const PrecisionContext ctx(x.precision());
  MpReal sum(ctx);
  MpReal term = x;
  const MpReal x2 = x * x;
  for (long n = 1; !term.is_zero(); n += 2) {
    sum += term;
    term *= x2;
    term /= (n + 1) * (n + 2);
    term = -term;
    if (abs(term) < ldexp(abs(sum) + MpReal(1L, ctx), -(ctx.bits() + 8))) {
      break;
    }
  }
  return sum;
}

}  // namespace

int required_period_digits(const BigTime& t, const MpReal& target_error) {
  const double decades = t.log10() - log10_of(target_error);
  return static_cast<int>(std::floor(decades + 1e-9)) + 1;
}

TimeReduction reduce_time(const BigTime& t, const PeriodResult& period,
                          const MpReal& target_error,
                          const PrecisionContext& ctx) {
  if (!target_error.is_finite() || target_error.sign() <= 0) {
    throw ConfigError("target error must be positive");
  }
  mpz_class k = floor_quotient(t, period.period);
  const MpReal epsilon = MpReal(period.width, ctx) / period.period;
  const MpReal bound = MpReal(target_error, ctx) / to_mp(t, ctx).value;
  if (!(epsilon < bound)) {
    const int digits = required_period_digits(t, target_error);
    throw InadmissibleError(
        "period relative error " + to_scientific(epsilon, 3) +
            " is not below " + to_scientific(bound, 3) + "; t = " +
            t.to_string() + " needs a period with at least " +
            std::to_string(digits) + " significant digits",
        digits, k.get_str());
  }
  const long needed = required_bits(t, decimal_digits_of(target_error));
  if (ctx.bits() < needed) {
    throw PrecisionError("reduction at t = " + t.to_string() + " needs " +
                         std::to_string(needed) + " bits, context has " +
                         std::to_string(ctx.bits()));
  }
  MpReal residual = exact_residual(t, k, period.period, ctx);
  return TimeReduction{std::move(k), std::move(residual), epsilon, true};
}

EvaluationConfig EvaluationConfig::defaults(int order, std::string_view step,
                                            const MpReal& period,
                                            std::string_view target_error) {
  const PrecisionContext probe(PrecisionContext::kMinBits);
  const MpReal error = MpReal::parse(target_error, probe);
  const PrecisionContext ctx(required_bits_for_log10(
      log10_of(period), decimal_digits_of(error) + 16));
  return EvaluationConfig{order, MpReal::parse(step, ctx), ctx,
                          MpReal::parse(target_error, ctx)};
}

Evaluation evaluate_at(const SystemSpec& sys, const BigTime& t,
                       const PeriodResult& period,
                       const EvaluationConfig& config) {
  const long reduction_bits = std::max(
      {config.ctx.bits(), period.period.precision(),
       required_bits(t, decimal_digits_of(config.target_error))});
  TimeReduction reduction = reduce_time(t, period, config.target_error,
                                        PrecisionContext(reduction_bits));

  const MpReal step(config.step, config.ctx);
  RunConfig run{sys,  config.order, config.ctx, step,
                MpReal(reduction.residual, config.ctx), std::nullopt};
  RunConfig raised = run;
  raised.order += config.verify_order_delta;
  RunStats base = integrate(run);
  const RunStats check = integrate(raised);

  int digits = std::numeric_limits<int>::max();
  for (std::size_t v = 0; v < base.final_state.vars.size(); ++v) {
    digits = std::min(digits, agreed_digits(base.final_state.vars[v],
                                            check.final_state.vars[v]));
  }
  if (reduction.k > 0) {
    // Residual uncertainty is about k * width.
    const MpReal shift =
        MpReal::from_integer(reduction.k, config.ctx) * period.width;
    if (!shift.is_zero()) {
      digits = std::min(
          digits, std::max(0, static_cast<int>(std::floor(-log10_of(shift)))));
    }
  }
  State state = std::move(base.final_state);
  state.t = MpReal(reduction.residual, config.ctx);
  return Evaluation{std::move(reduction), std::move(state), digits};
}

BigTime two_pi_truncated(int digits) {
  const int available = static_cast<int>(kPiDigits.size()) - 2;
  if (digits < 1 || digits > available - 5) {
    throw ConfigError("pi constant holds " + std::to_string(available) +
                      " digits; requested " + std::to_string(digits));
  }
  const BigTime pi = BigTime::parse(kPiDigits);
  const mpz_class twice = pi.mantissa() * 2;
  const std::string text = twice.get_str(10);
  const auto drop = static_cast<long>(text.size()) - digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(drop));
  const mpz_class kept = twice / scale;
  return BigTime(kept, pi.exponent() + drop);
}

MpReal harmonic_reference(const BigTime& t, int pi_digits) {
  const PrecisionContext ctx(kReferenceBits);
  // Truncated 2 pi has relative error below 10^-(digits-1).
  const int needed = static_cast<int>(std::floor(t.log10() + 1e-9)) + 16 + 2;
  if (pi_digits < needed) {
    throw InadmissibleError("sin(" + t.to_string() + ") to 1e-16 needs pi to " +
                                std::to_string(needed) + " digits, got " +
                                std::to_string(pi_digits),
                            needed, "");
  }
  const mpq_class two_pi = two_pi_truncated(pi_digits).to_rational();
  const mpq_class q = t.to_rational() / two_pi;
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  const mpq_class residual = t.to_rational() - mpq_class(k) * two_pi;
  return sine_series(MpReal::from_rational(residual, ctx));
}

}  // namespace periodica
