#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "periodica/errors.hpp"
#include "periodica/taylor.hpp"

using namespace periodica;

namespace {

// log2 of the one-step error of the harmonic oscillator from (0, 1).
double harmonic_step_error_log2(int order, const char* h, long bits) {
  const PrecisionContext ctx(bits);
  const SystemSpec sys(SystemId::harmonic);
  const MpReal step = MpReal::parse(h, ctx);
  const State end = eval_series(
      coefficients(sys, sys.initial_state(ctx), order, step, ctx), step);
  const MpReal err = abs(end.vars[0] - sin(step)) + abs(end.vars[1] - cos(step));
  return std::log2(err.to_double());
}

}  // namespace

TEST_CASE("series evaluation range") {
  const PrecisionContext ctx(128);
  const SystemSpec sys(SystemId::morse);
  const MpReal step = MpReal::parse("0.01", ctx);
  const TaylorSeries series =
      coefficients(sys, sys.initial_state(ctx), 10, step, ctx);
  const State at_zero = eval_series(series, MpReal(ctx));
  CHECK(at_zero.vars[0] == series.anchor.vars[0]);
  CHECK(at_zero.vars[1] == series.anchor.vars[1]);
  CHECK_THROWS_AS(eval_series(series, MpReal::parse("0.011", ctx)), RangeError);
  CHECK_THROWS_AS(eval_series(series, MpReal::parse("-1e-30", ctx)),
                  RangeError);
  CHECK_NOTHROW(eval_series(series, step));
}

TEST_CASE("step planning") {
  const PrecisionContext ctx(256);
  const MpReal h = MpReal::parse("0.01", ctx);
  const StepPlan exact = plan_steps(MpReal::parse("10", ctx), h);
  CHECK(exact.full_steps == 1000);
  CHECK_FALSE(exact.remainder);

  const StepPlan partial = plan_steps(MpReal::parse("10.005", ctx), h);
  CHECK(partial.full_steps == 1000);
  REQUIRE(partial.remainder);
  CHECK(abs(*partial.remainder - MpReal::parse("0.005", ctx)) <
        MpReal::parse("1e-70", ctx));

  const StepPlan none = plan_steps(MpReal(ctx), h);
  CHECK(none.full_steps == 0);
  CHECK_FALSE(none.remainder);

  const StepPlan short_run = plan_steps(MpReal::parse("0.004", ctx), h);
  CHECK(short_run.full_steps == 0);
  CHECK(short_run.remainder);
}

TEST_CASE("run configuration validation") {
  const PrecisionContext ctx(128);
  RunConfig bad = RunConfig::make(SystemSpec(SystemId::harmonic), 0, "0.01",
                                  BigTime::parse("1"), ctx);
  CHECK_THROWS_AS(integrate(bad), ConfigError);
  bad.order = 10;
  bad.step = MpReal(ctx);
  CHECK_THROWS_AS(integrate(bad), ConfigError);
  bad.step = MpReal::parse("0.01", ctx);
  bad.horizon = MpReal(-1L, ctx);
  CHECK_THROWS_AS(integrate(bad), ConfigError);
}

TEST_CASE("Morse integration matches the closed form") {
  const RunConfig run = RunConfig::make(SystemSpec(SystemId::morse), 20,
                                        "0.01", BigTime::parse("10"),
                                        PrecisionContext(256));
  const RunStats stats = integrate(run);
  const auto exact = oracle::morse_exact(BigTime::parse("10"), 256);
  CHECK(stats.loops == 1000);
  CHECK(agreed_digits(stats.final_state.vars[0], exact.y) >= 30);
  CHECK(agreed_digits(stats.final_state.vars[1], exact.p) >= 30);
  CHECK(stats.max_abs_dh < MpReal::parse("1e-40", run.ctx));
}

TEST_CASE("a partial final step lands exactly on the horizon") {
  const PrecisionContext ctx(256);
  const RunConfig run = RunConfig::make(SystemSpec(SystemId::harmonic), 30,
                                        "0.01", BigTime::parse("0.015"), ctx);
  std::vector<std::uint64_t> seen;
  const RunStats stats =
      integrate(run, [&](std::uint64_t k, const State&) { seen.push_back(k); });
  CHECK(stats.loops == 2);
  CHECK(seen == std::vector<std::uint64_t>{1, 2});
  CHECK(stats.final_state.t == to_mp(BigTime::parse("0.015"), ctx).value);
  CHECK(agreed_digits(stats.final_state.vars[0],
                      sin(MpReal::parse("0.015", ctx))) >= 60);
}

TEST_CASE("local error scales as h^(M+1)") {
  for (int order : {4, 6, 9}) {
    const double coarse = harmonic_step_error_log2(order, "0.1", 256);
    const double fine = harmonic_step_error_log2(order, "0.05", 256);
    CAPTURE(order);
    CHECK(std::abs((coarse - fine) - (order + 1)) <= 1.0);
  }
}

TEST_CASE("energy is conserved to working precision") {
  const RunConfig run =
      RunConfig::make(SystemSpec(SystemId::pendulum), 20, "0.01",
                      BigTime::parse("100"), PrecisionContext(192));
  CHECK(integrate(run).max_abs_dh < MpReal::parse("1e-40", run.ctx));
}

TEST_CASE("order selection") {
  const PrecisionContext ctx(256);
  const SystemSpec sys(SystemId::harmonic);
  const MpReal h = MpReal::parse("0.01", ctx);
  const MpReal tol = MpReal::parse("1e-20", ctx);
  const int order = select_order(sys, h, tol, ctx);
  CHECK(order % 2 == 1);
  // The one-step error of order M is about h^(M+1) / (M+1)!.
  CHECK(order <= 11);
  if (order > 2) {
    CHECK_THROWS_AS(select_order(sys, h, tol, ctx, order - 2),
                    OrderSearchError);
  }
  CHECK_THROWS_AS(select_order(sys, h, MpReal(ctx), ctx), ConfigError);
}

TEST_CASE("self verification on Morse") {
  const RunConfig run = RunConfig::make(SystemSpec(SystemId::morse), 20,
                                        "0.01", BigTime::parse("10"),
                                        PrecisionContext(256));
  CHECK(self_verify(run) >= 15);
  RunConfig poor = run;
  poor.order = 2;
  CHECK(self_verify(poor) < self_verify(run));
}

TEST_CASE("reruns are bit-identical") {
  const RunConfig run = RunConfig::make(SystemSpec(SystemId::nonseparable), 15,
                                        "0.01", BigTime::parse("5"),
                                        PrecisionContext(160));
  const RunStats a = integrate(run);
  const RunStats b = integrate(run);
  CHECK(a.final_state.vars[0] == b.final_state.vars[0]);
  CHECK(a.final_state.vars[1] == b.final_state.vars[1]);
  CHECK(a.max_abs_dh == b.max_abs_dh);
}

TEST_CASE("explicit initial state overrides the system default") {
  const PrecisionContext ctx(128);
  RunConfig run = RunConfig::make(SystemSpec(SystemId::harmonic), 20, "0.01",
                                  BigTime::parse("0"), ctx);
  run.initial = State{MpReal(ctx), {MpReal(3L, ctx), MpReal(ctx)}};
  const RunStats stats = integrate(run);
  CHECK(stats.loops == 0);
  CHECK(stats.final_state.vars[0] == 3L);
}
