#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "periodica/errors.hpp"
#include "periodica/fpa.hpp"

using namespace periodica;

TEST_CASE("harmonic period is 2 pi") {
  const PrecisionContext ctx(256);
  const PeriodResult r = period(SystemSpec(SystemId::harmonic),
                                MpReal::parse("0.01", ctx), 30, 30, ctx);
  CHECK(r.verified_digits == 30);
  CHECK(to_decimal(r.period, 30) == to_decimal(oracle::two_pi(256), 30));
  CHECK(r.loops_stage1 == 629);
}

TEST_CASE("Morse period against 2 pi / sqrt(0.02)") {
  const PrecisionContext ctx(192);
  const PeriodResult r = period(SystemSpec(SystemId::morse),
                                MpReal::parse("0.01", ctx), 30, 20, ctx);
  const MpReal exact = oracle::morse_period_exact(256);
  CHECK(r.verified_digits == 20);
  CHECK(to_decimal(r.period, 20) == to_decimal(exact, 20));
  CHECK(r.loops_stage1 == 4443);
  // The exact period lies inside the final bracket.
  CHECK(MpReal(r.period, PrecisionContext(256)) <= exact);
  CHECK(exact <= r.period + r.width);
}

TEST_CASE("pendulum period against the AGM formula") {
  const PrecisionContext ctx(256);
  const SystemSpec sys =
      SystemSpec(SystemId::pendulum).with_initial_value("p", "0.5");
  const PeriodResult r = period(sys, MpReal::parse("0.01", ctx), 40, 30, ctx);
  CHECK(to_decimal(r.period, 30) ==
        to_decimal(oracle::pendulum_period_agm("0.5", 256), 30));
}

TEST_CASE("bracket geometry and exact halving") {
  const PrecisionContext ctx(192);
  const MpReal h = MpReal::parse("0.01", ctx);
  const Bracket b =
      bracket_period(SystemSpec(SystemId::morse), h, 30, ctx, 10000);
  CHECK(b.loops == b.k + 1);
  CHECK(b.lower == h * static_cast<long>(b.k));
  CHECK(b.upper == h * static_cast<long>(b.k + 1));
  CHECK(b.anchor.anchor.t == b.lower);

  const PeriodResult r = refine_period(b, 25, ctx);
  // The width is h / 2^n exactly, with n the smallest count that gets the
  // width to T 10^-25 or below.
  CHECK(r.width == ldexp(h, -static_cast<long>(r.loops_stage2)));
  const double needed =
      std::log2(0.01 / (b.lower.to_double() * std::pow(10.0, -25)));
  CHECK(r.loops_stage2 == static_cast<std::uint64_t>(std::ceil(needed)));
  CHECK(r.period >= b.lower);
  CHECK(r.period + r.width <= b.upper);
}

TEST_CASE("stage 2 loop count for 30 digits") {
  const PrecisionContext ctx(256);
  const Bracket b = bracket_period(SystemSpec(SystemId::morse),
                                   MpReal::parse("0.01", ctx), 30, ctx, 10000);
  CHECK(refine_period(b, 30, ctx).loops_stage2 <= 100);
}

TEST_CASE("failure modes") {
  const PrecisionContext ctx(128);
  const MpReal h = MpReal::parse("0.01", ctx);
  CHECK_THROWS_AS(
      bracket_period(SystemSpec(SystemId::nonseparable), h, 20, ctx, 1000),
      ConfigError);
  CHECK_THROWS_AS(
      bracket_period(SystemSpec(SystemId::morse), h, 20, ctx, 100),
      NotFoundError);
  CHECK_THROWS_AS(
      bracket_period(SystemSpec(SystemId::morse), MpReal(ctx), 20, ctx, 100),
      ConfigError);
  const Bracket b =
      bracket_period(SystemSpec(SystemId::harmonic), h, 20, ctx, 1000);
  CHECK_THROWS_AS(refine_period(b, 60, ctx), PrecisionError);
  CHECK_THROWS_AS(refine_period(b, 0, ctx), ConfigError);
}

TEST_CASE("verification rerun limits the verified digits") {
  const PrecisionContext ctx(256);
  // Order 4 at h = 0.01 is only good to about 10 digits over a period.
  const PeriodResult r = period(SystemSpec(SystemId::harmonic),
                                MpReal::parse("0.01", ctx), 4, 30, ctx);
  CHECK(r.verified_digits < 30);
  CHECK(r.verified_digits >= 5);
}

TEST_CASE("bracket reuse gives the same result as a full run") {
  const PrecisionContext ctx(256);
  const SystemSpec sys(SystemId::harmonic);
  const MpReal h = MpReal::parse("0.01", ctx);
  const CheckedBracket brackets = bracket_with_check(sys, h, 30, ctx);
  const PeriodResult shared = refine_checked(brackets, 25);
  const PeriodResult full = period(sys, h, 30, 25, ctx);
  CHECK(shared.period == full.period);
  CHECK(shared.width == full.width);
  CHECK(shared.verified_digits == full.verified_digits);
}

TEST_CASE("periods given as decimal text") {
  const PrecisionContext ctx(256);
  const PeriodResult a = period_from_decimal("6.283185307179586", ctx);
  CHECK(a.verified_digits == 16);
  CHECK(a.width == MpReal::parse("1e-15", ctx));
  const PeriodResult b = period_from_decimal("0.0123e2", ctx);
  CHECK(b.verified_digits == 3);
  CHECK(b.width == MpReal::parse("0.01", ctx));
  CHECK_THROWS_AS(period_from_decimal("-1", ctx), ConfigError);
  CHECK_THROWS_AS(period_from_decimal("x", ctx), ConfigError);
}

TEST_CASE("period uncertainty from the momentum RMS") {
  const PrecisionContext ctx(192);
  const SystemSpec sys(SystemId::harmonic);
  const MpReal h = MpReal::parse("0.01", ctx);
  const PeriodResult r = period(sys, h, 20, 20, ctx);
  // RMS of cos over a period is 1/sqrt(2).
  const MpReal rms = momentum_rms(sys, r, h, 20, ctx);
  CHECK(rms.to_double() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  const MpReal dt =
      period_uncertainty(MpReal::parse("1e-10", ctx), sys, r, h, 20, ctx);
  CHECK(dt.to_double() == doctest::Approx(std::sqrt(2.0) * 1e-10).epsilon(1e-3));
  CHECK_THROWS_AS(
      period_uncertainty(MpReal(-1L, ctx), sys, r, h, 20, ctx), ConfigError);

  const SystemSpec still =
      SystemSpec(SystemId::harmonic).with_initial_value("p", "0");
  CHECK_THROWS_AS(period_uncertainty(MpReal::parse("1e-10", ctx), still, r, h,
                                     20, ctx),
                  DegenerateError);
}

TEST_CASE("period extraction is deterministic") {
  const PrecisionContext ctx(192);
  const SystemSpec sys =
      SystemSpec(SystemId::pendulum).with_initial_value("p", "1");
  const MpReal h = MpReal::parse("0.01", ctx);
  const PeriodResult a = period(sys, h, 20, 15, ctx);
  const PeriodResult b = period(sys, h, 20, 15, ctx);
  CHECK(a.period == b.period);
  CHECK(a.loops_stage2 == b.loops_stage2);
}
