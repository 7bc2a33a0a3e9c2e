#pragma once

// The built-in dynamical systems and their Taylor coefficient recurrences.
//
//   morse         y' = -p y,        p' = y^2 - y      (y = e^{-x})
//   pendulum      q' = p,           p' = -sin q
//   harmonic      x' = p,           p' = -x
//   nonseparable  p' = p sin q,     q' = p + cos q
//
// Variables are stored in the order listed on the left of each line.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "periodica/mp.hpp"

namespace periodica {

enum class SystemId { morse, pendulum, harmonic, nonseparable };

std::string_view to_string(SystemId id);
/// Throws UsageError for unknown names.
SystemId parse_system_id(std::string_view name);

struct State {
  MpReal t;
  std::vector<MpReal> vars;
};

/// Crossing event used for first-return detection: the trajectory returns
/// when `var` crosses `base` moving in `direction` (+1 upward, -1 downward).
struct EventSpec {
  std::size_t var;
  MpReal base;
  int direction;
};

/// Truncated Taylor expansion of a trajectory around (anchor.t, anchor.vars).
/// coeffs[v][k] is the k-th normalized derivative of variable v; `aux` holds
/// the auxiliary series used by the trigonometric recurrences.
struct TaylorSeries {
  int order;
  MpReal step;  // generating step size; evaluation is certified on [0, step]
  State anchor;
  std::vector<std::vector<MpReal>> coeffs;
  std::vector<std::vector<MpReal>> aux;
  std::vector<std::string> aux_names;
};

class SystemSpec {
 public:
  explicit SystemSpec(SystemId id);

  /// Replaces the initial value of one variable with decimal text.
  SystemSpec with_initial_value(std::string_view var_name,
                                std::string_view decimal) const;

  SystemId id() const noexcept { return id_; }
  std::string_view name() const noexcept { return to_string(id_); }
  std::size_t dimension() const noexcept { return 2; }
  const std::vector<std::string>& var_names() const noexcept {
    return var_names_;
  }
  std::size_t var_index(std::string_view name) const;
  /// Index of the momentum variable p.
  std::size_t momentum_index() const noexcept;
  bool separable() const noexcept { return id_ != SystemId::nonseparable; }

  /// Initial condition materialized at ctx (overrides re-parsed each time so
  /// the same system can be re-run at a different precision).
  State initial_state(const PrecisionContext& ctx) const;

  /// Right-hand side of the ODE.
  std::vector<MpReal> derivative(const std::vector<MpReal>& vars) const;

  /// Period-return event derived from the initial condition, or nullopt when
  /// the system has no designated event variable or it starts stationary.
  std::optional<EventSpec> event(const PrecisionContext& ctx) const;

  /// Throws DomainError for non-finite entries or y <= 0 (morse).
  void validate(const State& state) const;

 private:
  SystemId id_;
  std::vector<std::string> var_names_;
  std::vector<std::optional<std::string>> overrides_;
};

/// Taylor coefficients up to `order` at `state`. Throws ConfigError for
/// order < 1 and DomainError for invalid states.
TaylorSeries coefficients(const SystemSpec& sys, const State& state, int order,
                          const MpReal& step, const PrecisionContext& ctx);

/// Re-anchors an existing series at new variables, reusing its storage.
/// The series must have been produced by `coefficients` for the same system.
void recompute_coefficients(const SystemSpec& sys, TaylorSeries& series,
                            const MpReal& t, const std::vector<MpReal>& vars);

MpReal hamiltonian(const SystemSpec& sys, const std::vector<MpReal>& vars);
inline MpReal hamiltonian(const SystemSpec& sys, const State& state) {
  return hamiltonian(sys, state.vars);
}

/// x = -ln y for the Morse substitution y = e^{-x}.
MpReal morse_x(const MpReal& y);

}  // namespace periodica
