#pragma once

// Second-order explicit symplectic scheme (SE2) for separable systems
// H = g-potential(p) + f-potential(x):
//
//   u1      = p_k - h c1 f(x_k)      v1      = x_k + h d1 g(u1)
//   p_{k+1} = u1  - h c2 f(v1)       x_{k+1} = v1  + h d2 g(p_{k+1})
//
// with c1 = 0, c2 = 1, d1 = d2 = 1/2 and g(p) = p. The Morse system is
// stepped in its original coordinate x = -ln y and converted back at the
// boundaries.

#include "periodica/mp.hpp"
#include "periodica/systems.hpp"
#include "periodica/taylor.hpp"

namespace periodica {

struct Se2Coefficients {
  static constexpr int c1 = 0;
  static constexpr int c2 = 1;
  static constexpr double d1 = 0.5;
  static constexpr double d2 = 0.5;
};

enum class Arithmetic { multiprecision, hardware };

struct Se2Config {
  SystemSpec system;
  PrecisionContext ctx;
  MpReal step;
  MpReal horizon;
  Arithmetic arithmetic = Arithmetic::multiprecision;

  static Se2Config make(SystemSpec system, std::string_view step,
                        const BigTime& horizon, PrecisionContext ctx,
                        Arithmetic arithmetic = Arithmetic::multiprecision);
};

/// One SE2 step from a state in the system's native variables.
/// Throws ConfigError for non-separable systems.
State se2_step(const SystemSpec& sys, const State& state, const MpReal& step);

/// Repeated se2_step; a final shorter step covers any remainder of the
/// horizon. Observer and RunStats follow the Taylor integrator's contract.
RunStats se2_integrate(const Se2Config& config, const Observer& observer = {});

}  // namespace periodica
