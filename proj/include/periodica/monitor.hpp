#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "periodica/mp.hpp"
#include "periodica/systems.hpp"
#include "periodica/taylor.hpp"

namespace periodica {

/// Hamiltonian drift of one run. Maxima cover every step; `series` keeps
/// only every stride-th sample (step 0 included).
struct DriftReport {
  MpReal h0;
  MpReal max_abs_dh;
  MpReal max_rel_dh;  // max_abs_dh / |h0|, or max_abs_dh when h0 = 0
  std::uint64_t sample_count;
  std::vector<std::pair<MpReal, MpReal>> series;  // (t, dH)
};

enum class Scheme { pmt, se2 };

MpReal delta_h(const SystemSpec& sys, const State& state, const MpReal& h0);

DriftReport drift_report(const RunConfig& config, Scheme scheme,
                         std::uint64_t stride);

/// |dH| <= threshold when |H0| <= 1, |dH/H0| <= threshold otherwise.
bool is_conserved(const DriftReport& report, double threshold = 1e-16);

/// Writes "t,deltaH" rows with a header line.
void write_drift_csv(std::ostream& out, const DriftReport& report,
                     int digits = 20);

}  // namespace periodica
