#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "periodica/errors.hpp"
#include "periodica/systems.hpp"

using namespace periodica;

namespace {

const SystemId kAll[] = {SystemId::morse, SystemId::pendulum,
                         SystemId::harmonic, SystemId::nonseparable};

MpReal random_in(std::mt19937_64& rng, double lo, double hi,
                 const PrecisionContext& ctx) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return MpReal(dist(rng), ctx);
}

}  // namespace

TEST_CASE("system names round-trip") {
  for (SystemId id : kAll) CHECK(parse_system_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_system_id("lorenz"), UsageError);
}

TEST_CASE("default initial conditions and energies") {
  const PrecisionContext ctx(256);
  const State morse = SystemSpec(SystemId::morse).initial_state(ctx);
  CHECK(morse.vars[0] == 1L);
  CHECK(abs(morse.vars[1] * morse.vars[1] - MpReal::parse("0.98", ctx)) <
        MpReal::parse("1e-75", ctx));
  CHECK(abs(hamiltonian(SystemSpec(SystemId::morse), morse) +
            MpReal::parse("0.01", ctx)) < MpReal::parse("1e-70", ctx));

  const State pendulum = SystemSpec(SystemId::pendulum).initial_state(ctx);
  CHECK(hamiltonian(SystemSpec(SystemId::pendulum), pendulum) ==
        MpReal::parse("-0.5", ctx));
  const State harmonic = SystemSpec(SystemId::harmonic).initial_state(ctx);
  CHECK(hamiltonian(SystemSpec(SystemId::harmonic), harmonic) ==
        MpReal::parse("0.5", ctx));
  const State nonsep = SystemSpec(SystemId::nonseparable).initial_state(ctx);
  CHECK(hamiltonian(SystemSpec(SystemId::nonseparable), nonsep) ==
        MpReal::parse("1.5", ctx));
}

TEST_CASE("initial value overrides") {
  const PrecisionContext ctx(128);
  const SystemSpec sys =
      SystemSpec(SystemId::pendulum).with_initial_value("p", "1e-30");
  CHECK(sys.initial_state(ctx).vars[1] == MpReal::parse("1e-30", ctx));
  CHECK(sys.initial_state(PrecisionContext(512)).vars[1] ==
        MpReal::parse("1e-30", PrecisionContext(512)));
  CHECK_THROWS_AS(sys.with_initial_value("z", "1"), UsageError);
  CHECK_THROWS_AS(sys.with_initial_value("p", "one"), ConfigError);
  CHECK(SystemSpec(SystemId::morse).var_index("p") == 1);
  CHECK(SystemSpec(SystemId::nonseparable).momentum_index() == 0);
}

TEST_CASE("events follow the initial motion") {
  const PrecisionContext ctx(128);
  const auto morse = SystemSpec(SystemId::morse).event(ctx);
  REQUIRE(morse);
  CHECK(morse->var == 0);
  CHECK(morse->direction == -1);
  CHECK(morse->base == 1L);

  const auto pendulum = SystemSpec(SystemId::pendulum).event(ctx);
  REQUIRE(pendulum);
  CHECK(pendulum->direction == 1);
  const auto reversed = SystemSpec(SystemId::harmonic)
                            .with_initial_value("p", "-1")
                            .event(ctx);
  REQUIRE(reversed);
  CHECK(reversed->direction == -1);

  CHECK_FALSE(SystemSpec(SystemId::nonseparable).event(ctx));
  CHECK_FALSE(
      SystemSpec(SystemId::harmonic).with_initial_value("p", "0").event(ctx));
}

TEST_CASE("state validation") {
  const PrecisionContext ctx(128);
  const SystemSpec morse(SystemId::morse);
  State bad{MpReal(ctx), {MpReal(ctx), MpReal(1L, ctx)}};
  CHECK_THROWS_AS(morse.validate(bad), DomainError);
  CHECK_THROWS_AS(morse.with_initial_value("y", "-1").initial_state(ctx),
                  DomainError);
  State short_state{MpReal(ctx), {MpReal(1L, ctx)}};
  CHECK_THROWS_AS(morse.validate(short_state), DomainError);
  State nan{MpReal(ctx), {MpReal(1L, ctx), MpReal(ctx)}};
  mpfr_set_nan(nan.vars[1].raw());
  CHECK_THROWS_AS(SystemSpec(SystemId::harmonic).validate(nan), DomainError);
  CHECK_THROWS_AS(morse_x(MpReal(ctx)), DomainError);
  CHECK(morse_x(MpReal(1L, ctx)).is_zero());
}

TEST_CASE("coefficient order must be positive") {
  const PrecisionContext ctx(128);
  const SystemSpec sys(SystemId::harmonic);
  CHECK_THROWS_AS(coefficients(sys, sys.initial_state(ctx), 0,
                               MpReal::parse("0.01", ctx), ctx),
                  ConfigError);
}

TEST_CASE("coefficients match the Picard oracle on random states") {
  const PrecisionContext ctx(256);
  const MpReal tol = MpReal::parse("1e-60", ctx);
  const MpReal step = MpReal::parse("0.01", ctx);
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> orders(1, 8);
  for (SystemId id : kAll) {
    const SystemSpec sys(id);
    for (int trial = 0; trial < 100; ++trial) {
      const int order = orders(rng);
      std::vector<MpReal> x0;
      if (id == SystemId::morse) {
        x0 = {random_in(rng, 0.05, 3.0, ctx), random_in(rng, -2.0, 2.0, ctx)};
      } else {
        x0 = {random_in(rng, -3.0, 3.0, ctx), random_in(rng, -3.0, 3.0, ctx)};
      }
      const TaylorSeries series =
          coefficients(sys, State{MpReal(ctx), x0}, order, step, ctx);
      const auto expected = oracle::picard_coefficients(id, x0, order);
      for (std::size_t v = 0; v < 2; ++v) {
        for (int k = 0; k <= order; ++k) {
          const auto kk = static_cast<std::size_t>(k);
          const MpReal diff = abs(series.coeffs[v][kk] - expected[v][kk]);
          const MpReal scale = abs(expected[v][kk]) + MpReal(1L, ctx);
          CAPTURE(to_string(id));
          CAPTURE(trial);
          CAPTURE(k);
          CHECK(diff <= tol * scale);
        }
      }
    }
  }
}

TEST_CASE("trigonometric auxiliaries satisfy sin^2 + cos^2 = 1") {
  const PrecisionContext ctx(256);
  const MpReal tol = MpReal::parse("1e-60", ctx);
  for (SystemId id : {SystemId::pendulum, SystemId::nonseparable}) {
    const SystemSpec sys(id);
    State s{MpReal(ctx), {MpReal::parse("0.7", ctx), MpReal::parse("-1.3", ctx)}};
    const int order = 30;
    const TaylorSeries series =
        coefficients(sys, s, order, MpReal::parse("0.01", ctx), ctx);
    REQUIRE(series.aux_names.size() >= 2);
    const auto& sn = series.aux[0];
    const auto& cs = series.aux[1];
    for (int m = 0; m <= order; ++m) {
      MpReal sum(ctx);
      for (int i = 0; i <= m; ++i) {
        sum += sn[i] * sn[m - i] + cs[i] * cs[m - i];
      }
      if (m == 0) sum -= MpReal(1L, ctx);
      CAPTURE(m);
      CHECK(abs(sum) < tol);
    }
  }
}

TEST_CASE("recomputing in place equals a fresh expansion") {
  const PrecisionContext ctx(192);
  const MpReal step = MpReal::parse("0.01", ctx);
  for (SystemId id : kAll) {
    const SystemSpec sys(id);
    TaylorSeries series =
        coefficients(sys, sys.initial_state(ctx), 12, step, ctx);
    const std::vector<MpReal> vars{MpReal::parse("0.9", ctx),
                                   MpReal::parse("0.2", ctx)};
    const MpReal t = MpReal::parse("3.5", ctx);
    recompute_coefficients(sys, series, t, vars);
    const TaylorSeries fresh =
        coefficients(sys, State{t, vars}, 12, step, ctx);
    CHECK(series.anchor.t == t);
    for (std::size_t v = 0; v < 2; ++v) {
      for (std::size_t k = 0; k <= 12; ++k) {
        CHECK(series.coeffs[v][k] == fresh.coeffs[v][k]);
      }
    }
  }
}

TEST_CASE("first-order coefficients are the vector field") {
  const PrecisionContext ctx(128);
  for (SystemId id : kAll) {
    const SystemSpec sys(id);
    const State s = sys.initial_state(ctx);
    const TaylorSeries series =
        coefficients(sys, s, 1, MpReal::parse("0.1", ctx), ctx);
    const std::vector<MpReal> f = sys.derivative(s.vars);
    CHECK(series.coeffs[0][1] == f[0]);
    CHECK(series.coeffs[1][1] == f[1]);
  }
}
