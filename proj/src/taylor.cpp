#include "periodica/taylor.hpp"

#include <algorithm>
#include <limits>

#include "periodica/errors.hpp"

namespace periodica {

namespace {

// out[v] = sum_k coeffs[v][k] * offset^k, nested from the highest order.
void horner_into(const TaylorSeries& series, const MpReal& offset,
                 std::vector<MpReal>& out) {
  const auto order = static_cast<std::size_t>(series.order);
  for (std::size_t v = 0; v < series.coeffs.size(); ++v) {
    const auto& c = series.coeffs[v];
    mpfr_ptr r = out[v].raw();
    mpfr_set(r, c[order].raw(), MPFR_RNDN);
    for (std::size_t k = order; k-- > 0;) {
      mpfr_fma(r, r, offset.raw(), c[k].raw(), MPFR_RNDN);
    }
  }
}

void check_offset(const TaylorSeries& series, const MpReal& offset) {
  if (!offset.is_finite() || offset.sign() < 0 || offset > series.step) {
    throw RangeError("series offset " + to_scientific(offset, 6) +
                     " outside certified range [0, " +
                     to_scientific(series.step, 6) + "]");
  }
}

bool all_finite(const std::vector<MpReal>& vars) {
  return std::all_of(vars.begin(), vars.end(),
                     [](const MpReal& v) { return v.is_finite(); });
}

}  // namespace

RunConfig RunConfig::make(SystemSpec system, int order, std::string_view step,
                          const BigTime& horizon, PrecisionContext ctx) {
  MpReal h = MpReal::parse(step, ctx);
  MpReal end = to_mp(horizon, ctx).value;
  return RunConfig{std::move(system), order,          ctx,
                   std::move(h),      std::move(end), std::nullopt};
}

State RunConfig::initial_state() const {
  return initial ? *initial : system.initial_state(ctx);
}

void RunConfig::validate() const {
  if (order < 1) {
    throw ConfigError("Taylor order must be at least 1, got " +
                      std::to_string(order));
  }
  if (!step.is_finite() || step.sign() <= 0) {
    throw ConfigError("step size must be positive");
  }
  if (!horizon.is_finite() || horizon.sign() < 0) {
    throw ConfigError("horizon must be nonnegative");
  }
}

State eval_series(const TaylorSeries& series, const MpReal& offset) {
  check_offset(series, offset);
  const PrecisionContext ctx(series.coeffs[0][0].precision());
  State out{series.anchor.t + offset,
            std::vector<MpReal>(series.coeffs.size(), MpReal(ctx))};
  horner_into(series, offset, out.vars);
  return out;
}

StepPlan plan_steps(const MpReal& horizon, const MpReal& step) {
  if (horizon.is_zero()) return {0, std::nullopt};
  const PrecisionContext ctx(std::max(horizon.precision(), step.precision()));
  const MpReal quotient = horizon / step;
  MpReal nearest(ctx);
  mpfr_rint(nearest.raw(), quotient.raw(), MPFR_RNDN);
  const MpReal slack = ldexp(quotient, -(ctx.bits() - 16));
  constexpr auto kMaxSteps = std::numeric_limits<std::int64_t>::max();
  const auto to_count = [&](const MpReal& n) {
    if (n > MpReal(static_cast<double>(kMaxSteps), ctx)) {
      throw ConfigError("horizon needs more than 2^63 steps");
    }
    return static_cast<std::uint64_t>(mpfr_get_ui(n.raw(), MPFR_RNDN));
  };
  if (nearest.sign() > 0 && abs(quotient - nearest) <= slack) {
    return {to_count(nearest), std::nullopt};
  }
  const MpReal whole = floor(quotient);
  MpReal remainder = horizon - whole * step;
  if (remainder.sign() <= 0) return {to_count(whole), std::nullopt};
  if (remainder > step) remainder = step;
  return {to_count(whole), std::move(remainder)};
}

RunStats integrate(const RunConfig& config, const Observer& observer) {
  config.validate();
  const SystemSpec& sys = config.system;
  State state = config.initial_state();
  sys.validate(state);
  const MpReal h0 = hamiltonian(sys, state);
  MpReal max_dh(config.ctx);

  const StepPlan plan = plan_steps(config.horizon, config.step);
  const std::uint64_t total = plan.full_steps + (plan.remainder ? 1 : 0);
  if (total == 0) return {0, std::move(max_dh), std::move(state)};

  TaylorSeries series =
      coefficients(sys, state, config.order, config.step, config.ctx);
  const auto advance = [&](std::uint64_t index, const MpReal& offset) {
    if (index > 1) {
      recompute_coefficients(sys, series, state.t, state.vars);
    }
    horner_into(series, offset, state.vars);
    if (!all_finite(state.vars)) {
      throw IntegrationError("state became non-finite", index);
    }
    const MpReal dh = abs(hamiltonian(sys, state) - h0);
    if (dh > max_dh) max_dh = dh;
  };

  for (std::uint64_t i = 1; i <= plan.full_steps; ++i) {
    advance(i, config.step);
    mpfr_mul_ui(state.t.raw(), config.step.raw(), i, MPFR_RNDN);
    if (observer) observer(i, state);
  }
  if (plan.remainder) {
    advance(total, *plan.remainder);
    state.t = MpReal(config.horizon, config.ctx);
    if (observer) observer(total, state);
  }
  return {total, std::move(max_dh), std::move(state)};
}

int select_order(const SystemSpec& sys, const MpReal& step, const MpReal& tol,
                 const PrecisionContext& ctx, int max_order) {
  if (!tol.is_finite() || tol.sign() <= 0) {
    throw ConfigError("order-selection tolerance must be positive");
  }
  const State ic = sys.initial_state(ctx);
  const MpReal h(step, ctx);
  for (int order = 1; order <= max_order; order += 2) {
    const State low = eval_series(coefficients(sys, ic, order, h, ctx), h);
    const State high =
        eval_series(coefficients(sys, ic, order + 10, h, ctx), h);
    bool agree = true;
    for (std::size_t v = 0; v < low.vars.size() && agree; ++v) {
      agree = abs(low.vars[v] - high.vars[v]) <= tol;
    }
    if (!agree) continue;
    RunConfig run{sys, order, ctx, h, h * 100, ic};
    if (integrate(run).max_abs_dh < tol) return order;
  }
  throw OrderSearchError("no order up to " + std::to_string(max_order) +
                         " reaches tolerance " + to_scientific(tol, 3) +
                         " for system " + std::string(sys.name()));
}

int self_verify(const RunConfig& config, int delta_order) {
  RunConfig raised = config;
  raised.order += delta_order;
  const RunStats base = integrate(config);
  const RunStats check = integrate(raised);
  int digits = std::numeric_limits<int>::max();
  for (std::size_t v = 0; v < base.final_state.vars.size(); ++v) {
    digits = std::min(digits, agreed_digits(base.final_state.vars[v],
                                            check.final_state.vars[v]));
  }
  return digits;
}

}  // namespace periodica
