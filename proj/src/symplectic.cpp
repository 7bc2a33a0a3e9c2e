#include "periodica/symplectic.hpp"

#include <cmath>

#include "periodica/errors.hpp"

namespace periodica {

namespace {

MpReal scaled(const MpReal& h, double c) { return h * MpReal(c, h.context()); }
double scaled(double h, double c) { return h * c; }

// dp/dt = -f(x).
template <class Scalar>
Scalar force(SystemId id, const Scalar& x) {
  using std::exp;
  using std::sin;
  switch (id) {
    case SystemId::morse: {
      // -(e^{-2x} - e^{-x})
      const Scalar e = exp(-x);
      return e - e * e;
    }
    case SystemId::pendulum:
      return sin(x);
    default:
      return x;
  }
}

template <class Scalar>
Scalar canonical_energy(SystemId id, const Scalar& x, const Scalar& p) {
  using std::cos;
  using std::exp;
  const Scalar kinetic = p * p / 2;
  switch (id) {
    case SystemId::morse: {
      const Scalar e = exp(-x);
      return kinetic + (e * e - e * 2) / 2;
    }
    case SystemId::pendulum:
      return kinetic - cos(x);
    default:
      return kinetic + x * x / 2;
  }
}

template <class Scalar>
struct StepFactors {
  Scalar hc1, hc2, hd1, hd2;
  explicit StepFactors(const Scalar& h)
      : hc1(scaled(h, Se2Coefficients::c1)),
        hc2(scaled(h, Se2Coefficients::c2)),
        hd1(scaled(h, Se2Coefficients::d1)),
        hd2(scaled(h, Se2Coefficients::d2)) {}
};

template <class Scalar>
void advance(SystemId id, Scalar& x, Scalar& p, const StepFactors<Scalar>& k) {
  // c1 = 0 makes the first kick the identity.
  Scalar u1 = Se2Coefficients::c1 == 0 ? p : p - k.hc1 * force(id, x);
  Scalar v1 = x + k.hd1 * u1;
  p = u1 - k.hc2 * force(id, v1);
  x = v1 + k.hd2 * p;
}

void require_separable(const SystemSpec& sys) {
  if (!sys.separable()) {
    throw ConfigError("SE2 needs a separable system; " +
                      std::string(sys.name()) + " is not separable");
  }
}

// Native variables -> (position, momentum) in canonical coordinates.
std::pair<MpReal, MpReal> to_canonical(const SystemSpec& sys,
                                       const std::vector<MpReal>& vars) {
  if (sys.id() == SystemId::morse) return {morse_x(vars[0]), vars[1]};
  return {vars[0], vars[1]};
}

std::vector<MpReal> from_canonical(const SystemSpec& sys, const MpReal& x,
                                   const MpReal& p) {
  if (sys.id() == SystemId::morse) return {exp(-x), p};
  return {x, p};
}

RunStats integrate_multiprecision(const Se2Config& config,
                                  const Observer& observer) {
  const SystemSpec& sys = config.system;
  const SystemId id = sys.id();
  const State ic = sys.initial_state(config.ctx);
  auto canonical = to_canonical(sys, ic.vars);
  MpReal x = std::move(canonical.first);
  MpReal p = std::move(canonical.second);
  const MpReal h0 = canonical_energy(id, x, p);
  MpReal max_dh(config.ctx);
  const StepPlan plan = plan_steps(config.horizon, config.step);
  const std::uint64_t total = plan.full_steps + (plan.remainder ? 1 : 0);
  MpReal t(config.ctx);

  const auto after_step = [&](std::uint64_t index) {
    if (!x.is_finite() || !p.is_finite()) {
      throw IntegrationError("SE2 state became non-finite", index);
    }
    const MpReal dh = abs(canonical_energy(id, x, p) - h0);
    if (dh > max_dh) max_dh = dh;
    if (observer) observer(index, State{t, from_canonical(sys, x, p)});
  };

  const StepFactors<MpReal> factors(config.step);
  for (std::uint64_t i = 1; i <= plan.full_steps; ++i) {
    advance(id, x, p, factors);
    mpfr_mul_ui(t.raw(), config.step.raw(), i, MPFR_RNDN);
    after_step(i);
  }
  if (plan.remainder) {
    advance(id, x, p, StepFactors<MpReal>(*plan.remainder));
    t = MpReal(config.horizon, config.ctx);
    after_step(total);
  }
  return {total, std::move(max_dh), State{t, from_canonical(sys, x, p)}};
}

RunStats integrate_hardware(const Se2Config& config, const Observer& observer) {
  const SystemSpec& sys = config.system;
  const SystemId id = sys.id();
  const PrecisionContext& ctx = config.ctx;
  const State ic = sys.initial_state(ctx);
  const auto canonical = to_canonical(sys, ic.vars);
  double x = canonical.first.to_double();
  double p = canonical.second.to_double();
  const double h0 = canonical_energy(id, x, p);
  double max_dh = 0.0;
  const double step = config.step.to_double();
  const StepPlan plan = plan_steps(config.horizon, config.step);
  const std::uint64_t total = plan.full_steps + (plan.remainder ? 1 : 0);
  double t = 0.0;

  const auto native = [&] {
    return from_canonical(sys, MpReal(x, ctx), MpReal(p, ctx));
  };
  const auto after_step = [&](std::uint64_t index) {
    if (!std::isfinite(x) || !std::isfinite(p)) {
      throw IntegrationError("SE2 state became non-finite", index);
    }
    max_dh = std::max(max_dh, std::abs(canonical_energy(id, x, p) - h0));
    if (observer) observer(index, State{MpReal(t, ctx), native()});
  };

  const StepFactors<double> factors(step);
  for (std::uint64_t i = 1; i <= plan.full_steps; ++i) {
    advance(id, x, p, factors);
    t = step * static_cast<double>(i);
    after_step(i);
  }
  if (plan.remainder) {
    advance(id, x, p, StepFactors<double>(plan.remainder->to_double()));
    t = config.horizon.to_double();
    after_step(total);
  }
  return {total, MpReal(max_dh, ctx), State{MpReal(t, ctx), native()}};
}

}  // namespace

Se2Config Se2Config::make(SystemSpec system, std::string_view step,
                          const BigTime& horizon, PrecisionContext ctx,
                          Arithmetic arithmetic) {
  MpReal h = MpReal::parse(step, ctx);
  MpReal end = to_mp(horizon, ctx).value;
  return Se2Config{std::move(system), ctx, std::move(h), std::move(end),
                   arithmetic};
}

State se2_step(const SystemSpec& sys, const State& state, const MpReal& step) {
  require_separable(sys);
  sys.validate(state);
  auto [x, p] = to_canonical(sys, state.vars);
  advance(sys.id(), x, p, StepFactors<MpReal>(step));
  return State{state.t + step, from_canonical(sys, x, p)};
}

RunStats se2_integrate(const Se2Config& config, const Observer& observer) {
  require_separable(config.system);
  if (!config.step.is_finite() || config.step.sign() <= 0) {
    throw ConfigError("step size must be positive");
  }
  if (!config.horizon.is_finite() || config.horizon.sign() < 0) {
    throw ConfigError("horizon must be nonnegative");
  }
  return config.arithmetic == Arithmetic::hardware
             ? integrate_hardware(config, observer)
             : integrate_multiprecision(config, observer);
}

}  // namespace periodica
