#pragma once

// Published reference values used by `tables` and the acceptance suite.
// Stored as decimal text exactly as printed.

#include <array>
#include <string_view>

namespace periodica::reference {

// Morse period, M = 200, h = 0.01, 2000 bits.
inline constexpr std::string_view kMorsePeriod30 =
    "44.4288293815836624701588099006";
inline constexpr std::string_view kMorsePeriod100 =
    "44.428829381583662470158809900606936986146216893756902230853956069564347"
    "93099473910575326934764765237";

// Reduction of t = 1e30 modulo 2 pi.
inline constexpr std::string_view kPi50 =
    "3.1415926535897932384626433832795028841971693993751";
inline constexpr std::string_view kPi16 = "3.141592653589793";
inline constexpr std::string_view kK50 = "159154943091895335768883763372";
inline constexpr std::string_view kK16 = "159154943091895335768883763373";
inline constexpr std::string_view kResidual50 = "3.231831977487846";
inline constexpr std::string_view kSin1e30 = "-0.090116901912138058";

struct MorseMomentumRow {
  std::string_view t;
  std::string_view se2;     // empty when not reported
  std::string_view direct;  // empty when not reported
  std::string_view fpa;
};

// Morse momentum p(t): SE2 direct, PMT direct, FPA.
inline constexpr std::array<MorseMomentumRow, 16> kMorseMomentum{{
    {"0", "0.989949493661166", "0.989949493661166", "0.989949493661166"},
    {"10", "0.142033683767425", "0.142049967327890", "0.142049967327890"},
    {"1e2", "0.120638240019144", "0.120968440888269", "0.120968440888269"},
    {"1e3", "-0.015582896828410", "-0.013519353495639", "-0.013519353495639"},
    {"1e4", "0.275552330918520", "0.406695207104251", "0.406695207104251"},
    {"1e5", "0.120371703265026", "-0.209442226126745", "-0.209442226126745"},
    {"1e6", "-0.017153824006555", "-0.575071021680786", "-0.575071021680786"},
    {"1e7", "0.214900072283681", "0.406850634713920", "0.406850634713920"},
    {"1e8", "", "", "-0.208888390114776"},
    {"1e9", "", "", "-0.548460247715134"},
    {"1e10", "", "", "0.632436322896067"},
    {"1e20", "", "", "-0.459751580833174"},
    {"1e30", "", "", "0.203324673559885"},
    {"1e40", "", "", "0.240998707662065"},
    {"1e50", "", "", "0.544244466975686"},
    {"1e60", "", "", "-0.839008449972302"},
}};

struct PendulumPeriodRow {
  std::string_view p0;
  std::string_view period;  // 50 significant digits
};

// Pendulum period with q(0) = 0, M = 200, h = 0.01, 2000 bits.
inline constexpr std::array<PendulumPeriodRow, 9> kPendulumPeriods{{
    {"1", "6.7430014192503841714848146311963079580032035765643"},
    {"1e-1", "6.2871178299331781141446745665180361610970124356918"},
    {"1e-2", "6.2832245776399990205430348375448192284997546476674"},
    {"1e-3", "6.2831856998787233989673928392330685974085610706684"},
    {"1e-4", "6.2831853111065772994348591606129983671149348353934"},
    {"1e-5", "6.2831853072188563850957114151234372289079555651010"},
    {"1e-10", "6.2831853071795864769292137573759930099424226253101"},
    {"1e-20", "6.2831853071795864769252867665590057683943780686583"},
    {"1e-30", "6.2831853071795864769252867665590057683943387987502"},
}};
inline constexpr std::string_view kTwoPi50 =
    "6.2831853071795864769252867665590057683943387987502";

}  // namespace periodica::reference
