#include "periodica/monitor.hpp"

#include "periodica/errors.hpp"
#include "periodica/symplectic.hpp"

namespace periodica {

MpReal delta_h(const SystemSpec& sys, const State& state, const MpReal& h0) {
  return hamiltonian(sys, state) - h0;
}

DriftReport drift_report(const RunConfig& config, Scheme scheme,
                         std::uint64_t stride) {
  if (stride == 0) throw ConfigError("stride must be positive");
  const SystemSpec& sys = config.system;
  const State ic = config.initial_state();
  const MpReal h0 = hamiltonian(sys, ic);
  DriftReport report{h0, MpReal(config.ctx), MpReal(config.ctx), 1, {}};
  report.series.emplace_back(ic.t, MpReal(config.ctx));

  const Observer observe = [&](std::uint64_t step, const State& state) {
    MpReal dh = delta_h(sys, state, h0);
    MpReal magnitude = abs(dh);
    if (magnitude > report.max_abs_dh) report.max_abs_dh = std::move(magnitude);
    ++report.sample_count;
    if (step % stride == 0) report.series.emplace_back(state.t, std::move(dh));
  };

  if (scheme == Scheme::pmt) {
    integrate(config, observe);
  } else {
    se2_integrate(Se2Config{sys, config.ctx, config.step, config.horizon},
                  observe);
  }
  report.max_rel_dh =
      h0.is_zero() ? report.max_abs_dh : report.max_abs_dh / abs(h0);
  return report;
}

bool is_conserved(const DriftReport& report, double threshold) {
  const PrecisionContext ctx(report.max_abs_dh.precision());
  const MpReal limit(threshold, ctx);
  if (abs(report.h0) <= MpReal(1L, ctx)) return report.max_abs_dh <= limit;
  return report.max_rel_dh <= limit;
}

void write_drift_csv(std::ostream& out, const DriftReport& report,
                     int digits) {
  out << "t,deltaH\n";
  for (const auto& [t, dh] : report.series) {
    out << to_decimal(t, digits, DigitMode::nearest) << ','
        << to_scientific(dh, digits) << '\n';
  }
}

}  // namespace periodica
