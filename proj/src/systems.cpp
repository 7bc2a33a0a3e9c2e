#include "periodica/systems.hpp"

#include <algorithm>

#include "periodica/errors.hpp"

namespace periodica {

namespace {

using Array = std::vector<MpReal>;

// Scratch pair shared by the recurrences of one re-anchoring.
struct Scratch {
  mpfr_t acc;
  mpfr_t tmp;
  explicit Scratch(long bits) {
    mpfr_init2(acc, bits);
    mpfr_init2(tmp, bits);
  }
  ~Scratch() {
    mpfr_clear(acc);
    mpfr_clear(tmp);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

// acc = sum_{i=from..m} a[m-i] * b[i], accumulated with i ascending.
void convolve(Scratch& s, const Array& a, const Array& b, std::size_t m,
              std::size_t from) {
  mpfr_set_zero(s.acc, 1);
  for (std::size_t i = from; i <= m; ++i) {
    mpfr_mul(s.tmp, a[m - i].raw(), b[i].raw(), MPFR_RNDN);
    mpfr_add(s.acc, s.acc, s.tmp, MPFR_RNDN);
  }
}

void morse_recurrence(TaylorSeries& series, Scratch& s) {
  Array& y = series.coeffs[0];
  Array& p = series.coeffs[1];
  const auto order = static_cast<std::size_t>(series.order);
  for (std::size_t k = 0; k < order; ++k) {
    convolve(s, y, p, k, 0);
    mpfr_div_ui(y[k + 1].raw(), s.acc, k + 1, MPFR_RNDN);
    mpfr_neg(y[k + 1].raw(), y[k + 1].raw(), MPFR_RNDN);

    convolve(s, y, y, k, 0);
    mpfr_sub(s.acc, s.acc, y[k].raw(), MPFR_RNDN);
    mpfr_div_ui(p[k + 1].raw(), s.acc, k + 1, MPFR_RNDN);
  }
}

void harmonic_recurrence(TaylorSeries& series) {
  Array& x = series.coeffs[0];
  Array& p = series.coeffs[1];
  const auto order = static_cast<std::size_t>(series.order);
  for (std::size_t k = 0; k < order; ++k) {
    mpfr_div_ui(x[k + 1].raw(), p[k].raw(), k + 1, MPFR_RNDN);
    mpfr_div_ui(p[k + 1].raw(), x[k].raw(), k + 1, MPFR_RNDN);
    mpfr_neg(p[k + 1].raw(), p[k + 1].raw(), MPFR_RNDN);
  }
}

// Sine/cosine series of an argument series u: with w_i = i u_i,
//   sin_m = (1/m) sum_{i=1..m} w_i cos_{m-i}
//   cos_m = -(1/m) sum_{i=1..m} w_i sin_{m-i}
void trig_step(Scratch& s, const Array& u, Array& sine, Array& cosine,
               Array& w, std::size_t m) {
  mpfr_mul_ui(w[m].raw(), u[m].raw(), m, MPFR_RNDN);
  convolve(s, cosine, w, m, 1);
  mpfr_div_ui(sine[m].raw(), s.acc, m, MPFR_RNDN);
  convolve(s, sine, w, m, 1);
  mpfr_div_ui(cosine[m].raw(), s.acc, m, MPFR_RNDN);
  mpfr_neg(cosine[m].raw(), cosine[m].raw(), MPFR_RNDN);
}

void pendulum_recurrence(TaylorSeries& series, Scratch& s) {
  Array& q = series.coeffs[0];
  Array& p = series.coeffs[1];
  Array& sine = series.aux[0];
  Array& cosine = series.aux[1];
  Array& w = series.aux[2];
  const auto order = static_cast<std::size_t>(series.order);
  mpfr_sin_cos(sine[0].raw(), cosine[0].raw(), q[0].raw(), MPFR_RNDN);
  mpfr_set_zero(w[0].raw(), 1);
  for (std::size_t m = 0; m < order; ++m) {
    if (m >= 1) trig_step(s, q, sine, cosine, w, m);
    mpfr_div_ui(q[m + 1].raw(), p[m].raw(), m + 1, MPFR_RNDN);
    mpfr_div_ui(p[m + 1].raw(), sine[m].raw(), m + 1, MPFR_RNDN);
    mpfr_neg(p[m + 1].raw(), p[m + 1].raw(), MPFR_RNDN);
  }
  if (order >= 1) trig_step(s, q, sine, cosine, w, order);
}

void nonseparable_terms(Scratch& s, TaylorSeries& series, std::size_t m) {
  Array& p = series.coeffs[0];
  Array& q = series.coeffs[1];
  Array& b = series.aux[0];
  Array& g = series.aux[1];
  Array& c = series.aux[2];
  Array& d = series.aux[3];
  Array& w = series.aux[4];
  if (m >= 1) trig_step(s, q, b, g, w, m);
  convolve(s, p, b, m, 0);
  mpfr_set(c[m].raw(), s.acc, MPFR_RNDN);
  mpfr_add(d[m].raw(), p[m].raw(), g[m].raw(), MPFR_RNDN);
}

void nonseparable_recurrence(TaylorSeries& series, Scratch& s) {
  Array& p = series.coeffs[0];
  Array& q = series.coeffs[1];
  const auto order = static_cast<std::size_t>(series.order);
  mpfr_sin_cos(series.aux[0][0].raw(), series.aux[1][0].raw(), q[0].raw(),
               MPFR_RNDN);
  mpfr_set_zero(series.aux[4][0].raw(), 1);
  for (std::size_t m = 0; m < order; ++m) {
    nonseparable_terms(s, series, m);
    mpfr_div_ui(p[m + 1].raw(), series.aux[2][m].raw(), m + 1, MPFR_RNDN);
    mpfr_div_ui(q[m + 1].raw(), series.aux[3][m].raw(), m + 1, MPFR_RNDN);
  }
  nonseparable_terms(s, series, order);
}

std::vector<std::string> aux_names_for(SystemId id) {
  switch (id) {
    case SystemId::pendulum:
      return {"sin_q", "cos_q", "w"};
    case SystemId::nonseparable:
      return {"b", "g", "c", "d", "w"};
    default:
      return {};
  }
}

}  // namespace

std::string_view to_string(SystemId id) {
  switch (id) {
    case SystemId::morse:
      return "morse";
    case SystemId::pendulum:
      return "pendulum";
    case SystemId::harmonic:
      return "harmonic";
    case SystemId::nonseparable:
      return "nonseparable";
  }
  return "unknown";
}

SystemId parse_system_id(std::string_view name) {
  for (const SystemId id : {SystemId::morse, SystemId::pendulum,
                            SystemId::harmonic, SystemId::nonseparable}) {
    if (name == to_string(id)) return id;
  }
  throw UsageError("unknown system '" + std::string(name) +
                   "' (expected morse, pendulum, harmonic or nonseparable)");
}

SystemSpec::SystemSpec(SystemId id) : id_(id), overrides_(2) {
  switch (id) {
    case SystemId::morse:
      var_names_ = {"y", "p"};
      break;
    case SystemId::pendulum:
      var_names_ = {"q", "p"};
      break;
    case SystemId::harmonic:
      var_names_ = {"x", "p"};
      break;
    case SystemId::nonseparable:
      var_names_ = {"p", "q"};
      break;
  }
}

std::size_t SystemSpec::var_index(std::string_view name) const {
  const auto it = std::find(var_names_.begin(), var_names_.end(), name);
  if (it == var_names_.end()) {
    throw UsageError("system " + std::string(this->name()) +
                     " has no variable '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - var_names_.begin());
}

std::size_t SystemSpec::momentum_index() const noexcept {
  return id_ == SystemId::nonseparable ? 0 : 1;
}

SystemSpec SystemSpec::with_initial_value(std::string_view var_name,
                                          std::string_view decimal) const {
  SystemSpec out = *this;
  const std::size_t i = var_index(var_name);
  MpReal::parse(decimal, PrecisionContext(PrecisionContext::kMinBits));
  out.overrides_[i] = std::string(decimal);
  return out;
}

State SystemSpec::initial_state(const PrecisionContext& ctx) const {
  std::vector<MpReal> vars;
  vars.reserve(2);
  switch (id_) {
    case SystemId::morse:
      vars.emplace_back(1L, ctx);
      vars.push_back(sqrt(MpReal::parse("0.98", ctx)));
      break;
    case SystemId::pendulum:
    case SystemId::harmonic:
      vars.emplace_back(0L, ctx);
      vars.emplace_back(1L, ctx);
      break;
    case SystemId::nonseparable:
      vars.emplace_back(1L, ctx);
      vars.emplace_back(0L, ctx);
      break;
  }
  for (std::size_t i = 0; i < overrides_.size(); ++i) {
    if (overrides_[i]) vars[i] = MpReal::parse(*overrides_[i], ctx);
  }
  State state{MpReal(ctx), std::move(vars)};
  validate(state);
  return state;
}

std::vector<MpReal> SystemSpec::derivative(
    const std::vector<MpReal>& vars) const {
  const MpReal& a = vars[0];
  const MpReal& b = vars[1];
  switch (id_) {
    case SystemId::morse:
      return {-(b * a), a * a - a};
    case SystemId::pendulum:
      return {b, -sin(a)};
    case SystemId::harmonic:
      return {b, -a};
    case SystemId::nonseparable:
      return {a * sin(b), a + cos(b)};
  }
  return {};
}

std::optional<EventSpec> SystemSpec::event(const PrecisionContext& ctx) const {
  if (id_ == SystemId::nonseparable) return std::nullopt;
  const State ic = initial_state(ctx);
  constexpr std::size_t var = 0;
  const int direction = derivative(ic.vars)[var].sign();
  if (direction == 0) return std::nullopt;
  return EventSpec{var, ic.vars[var], direction > 0 ? 1 : -1};
}

void SystemSpec::validate(const State& state) const {
  if (state.vars.size() != dimension()) {
    throw DomainError("state has " + std::to_string(state.vars.size()) +
                      " variables, system " + std::string(name()) +
                      " needs " + std::to_string(dimension()));
  }
  for (const MpReal& v : state.vars) {
    if (!v.is_finite()) throw DomainError("state contains a non-finite value");
  }
  if (id_ == SystemId::morse && state.vars[0].sign() <= 0) {
    throw DomainError("morse state requires y > 0");
  }
}

TaylorSeries coefficients(const SystemSpec& sys, const State& state, int order,
                          const MpReal& step, const PrecisionContext& ctx) {
  if (order < 1) {
    throw ConfigError("Taylor order must be at least 1, got " +
                      std::to_string(order));
  }
  sys.validate(state);
  const auto len = static_cast<std::size_t>(order) + 1;
  const std::vector<MpReal> zeros(len, MpReal(ctx));
  TaylorSeries series{order,
                      MpReal(step, ctx),
                      State{MpReal(ctx), {}},
                      std::vector<std::vector<MpReal>>(sys.dimension(), zeros),
                      {},
                      aux_names_for(sys.id())};
  series.aux.assign(series.aux_names.size(), zeros);
  recompute_coefficients(sys, series, state.t, state.vars);
  return series;
}

void recompute_coefficients(const SystemSpec& sys, TaylorSeries& series,
                            const MpReal& t, const std::vector<MpReal>& vars) {
  const long bits = series.coeffs[0][0].precision();
  series.anchor.t = MpReal(t, PrecisionContext(bits));
  series.anchor.vars.resize(vars.size(), MpReal(PrecisionContext(bits)));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    mpfr_set(series.coeffs[v][0].raw(), vars[v].raw(), MPFR_RNDN);
    series.anchor.vars[v] = series.coeffs[v][0];
  }
  Scratch scratch(bits);
  switch (sys.id()) {
    case SystemId::morse:
      morse_recurrence(series, scratch);
      break;
    case SystemId::harmonic:
      harmonic_recurrence(series);
      break;
    case SystemId::pendulum:
      pendulum_recurrence(series, scratch);
      break;
    case SystemId::nonseparable:
      nonseparable_recurrence(series, scratch);
      break;
  }
}

MpReal hamiltonian(const SystemSpec& sys, const std::vector<MpReal>& vars) {
  const MpReal& a = vars[0];
  const MpReal& b = vars[1];
  switch (sys.id()) {
    case SystemId::morse:
      // p^2/2 + (y^2 - 2y)/2
      return (b * b) / 2 + (a * a - a * 2) / 2;
    case SystemId::pendulum:
      return (b * b) / 2 - cos(a);
    case SystemId::harmonic:
      return (a * a + b * b) / 2;
    case SystemId::nonseparable:
      return (a * a) / 2 + a * cos(b);
  }
  return MpReal(PrecisionContext(a.precision()));
}

MpReal morse_x(const MpReal& y) {
  if (!y.is_finite() || y.sign() <= 0) {
    throw DomainError("morse_x requires y > 0");
  }
  return -log(y);
}

}  // namespace periodica
