#include <doctest.h>

#include <cmath>

#include "periodica/errors.hpp"
#include "periodica/monitor.hpp"
#include "periodica/symplectic.hpp"

using namespace periodica;

namespace {

// Same scheme written out by hand in doubles for the Morse x coordinate.
double morse_se2_reference(double h, long steps) {
  double x = 0.0;
  double p = std::sqrt(0.98);
  for (long i = 0; i < steps; ++i) {
    const double v = x + 0.5 * h * p;
    const double e = std::exp(-v);
    p -= h * (e - e * e);
    x = v + 0.5 * h * p;
  }
  return p;
}

MpReal harmonic_error_at_one(const char* h) {
  const PrecisionContext ctx(192);
  const RunStats stats =
      se2_integrate(Se2Config::make(SystemSpec(SystemId::harmonic), h,
                                    BigTime::parse("1"), ctx));
  return abs(stats.final_state.vars[0] - sin(MpReal(1L, ctx)));
}

}  // namespace

TEST_CASE("non-separable systems are rejected") {
  const PrecisionContext ctx(128);
  const SystemSpec sys(SystemId::nonseparable);
  CHECK_THROWS_AS(se2_step(sys, sys.initial_state(ctx),
                           MpReal::parse("0.01", ctx)),
                  ConfigError);
  CHECK_THROWS_AS(
      se2_integrate(Se2Config::make(sys, "0.01", BigTime::parse("1"), ctx)),
      ConfigError);
}

TEST_CASE("one harmonic step by hand") {
  const PrecisionContext ctx(128);
  const SystemSpec sys(SystemId::harmonic);
  const MpReal h = MpReal::parse("0.1", ctx);
  const State next = se2_step(sys, sys.initial_state(ctx), h);
  // v1 = h/2, p1 = 1 - h^2/2, x1 = h/2 + (h/2) p1
  const MpReal half = h / 2L;
  const MpReal p1 = MpReal(1L, ctx) - h * half;
  CHECK(next.vars[1] == p1);
  CHECK(next.vars[0] == half + half * p1);
  CHECK(next.t == h);
}

TEST_CASE("global error is second order") {
  const double coarse = harmonic_error_at_one("0.01").to_double();
  const double fine = harmonic_error_at_one("0.005").to_double();
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("hardware path matches a hand-written loop") {
  const PrecisionContext ctx(128);
  const RunStats stats = se2_integrate(
      Se2Config::make(SystemSpec(SystemId::morse), "0.01",
                      BigTime::parse("10"), ctx, Arithmetic::hardware));
  CHECK(stats.loops == 1000);
  CHECK(stats.final_state.vars[1].to_double() ==
        doctest::Approx(morse_se2_reference(0.01, 1000)).epsilon(1e-13));
}

TEST_CASE("multiprecision and hardware paths agree to double accuracy") {
  const PrecisionContext ctx(192);
  const SystemSpec sys(SystemId::pendulum);
  const RunStats mp = se2_integrate(
      Se2Config::make(sys, "0.01", BigTime::parse("10"), ctx));
  const RunStats hw = se2_integrate(Se2Config::make(
      sys, "0.01", BigTime::parse("10"), ctx, Arithmetic::hardware));
  CHECK(agreed_digits(mp.final_state.vars[0], hw.final_state.vars[0]) >= 11);
  CHECK(agreed_digits(mp.final_state.vars[1], hw.final_state.vars[1]) >= 11);
}

TEST_CASE("energy error oscillates without drift") {
  const PrecisionContext ctx(128);
  const RunConfig run = RunConfig::make(SystemSpec(SystemId::morse), 20,
                                        "0.1", BigTime::parse("2000"), ctx);
  const DriftReport report = drift_report(run, Scheme::se2, 1);
  const std::size_t n = report.series.size();
  MpReal first(ctx);
  MpReal last(ctx);
  for (std::size_t i = 0; i < n; ++i) {
    const MpReal m = abs(report.series[i].second);
    if (i < n / 4 && m > first) first = m;
    if (i >= 3 * n / 4 && m > last) last = m;
  }
  CHECK(first.sign() > 0);
  CHECK(last < first * 2L);
  CHECK(first < last * 2L);
}

TEST_CASE("remainder step covers the horizon") {
  const PrecisionContext ctx(128);
  const RunStats stats =
      se2_integrate(Se2Config::make(SystemSpec(SystemId::harmonic), "0.01",
                                    BigTime::parse("0.025"), ctx));
  CHECK(stats.loops == 3);
  CHECK(stats.final_state.t == to_mp(BigTime::parse("0.025"), ctx).value);
}
