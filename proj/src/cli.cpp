#include "periodica/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "periodica/errors.hpp"
#include "periodica/fpa.hpp"
#include "periodica/longterm.hpp"
#include "periodica/monitor.hpp"
#include "periodica/reproduce.hpp"
#include "periodica/symplectic.hpp"
#include "periodica/taylor.hpp"

namespace periodica::cli {

namespace {

// Precision for plain integration, comparison and verification runs.
constexpr long kWorkingBits = 256;

struct Options {
  std::string system = "morse";
  std::optional<int> order;
  std::optional<std::string> step;
  std::optional<long> bits;
  std::optional<int> digits;
  std::vector<std::string> times;
  std::vector<std::string> ic;
  std::optional<std::string> p0;
  std::string format = "text";
  bool json = false;
  std::string output;
  std::string config;

  std::string scheme = "pmt";
  bool hardware = false;
  std::uint64_t stride = 1;
  std::uint64_t max_steps = PeriodOptions{}.max_steps;
  std::string target_error = "1e-16";
  std::optional<std::string> period;
  std::optional<std::string> position_error;
  int delta = 10;
  std::vector<int> tables;
  bool extended = false;
  std::string outdir = "figures";
  std::uint64_t max_rows = FigureOptions{}.max_rows;
};

long default_bits(long fallback) {
  const char* env = std::getenv(kDefaultBitsEnv);
  if (env == nullptr || *env == '\0') return fallback;
  std::size_t used = 0;
  long bits = 0;
  try {
    bits = std::stol(env, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string_view(env).size() ||
      bits < PrecisionContext::kMinBits) {
    throw UsageError(std::string(kDefaultBitsEnv) + "='" + env +
                     "' is not an integer >= " +
                     std::to_string(PrecisionContext::kMinBits));
  }
  return bits;
}

PrecisionContext context_for(const Options& o, long fallback) {
  const long bits = o.bits.value_or(default_bits(fallback));
  if (bits < PrecisionContext::kMinBits) {
    throw UsageError("--bits must be at least " +
                     std::to_string(PrecisionContext::kMinBits));
  }
  return PrecisionContext(bits);
}

OutputFormat format_of(const Options& o) {
  return o.json ? OutputFormat::json : parse_output_format(o.format);
}

std::string single_time(const Options& o, std::optional<std::string> fallback) {
  if (o.times.empty()) {
    if (!fallback) throw UsageError("--t is required");
    return *fallback;
  }
  if (o.times.size() > 1) throw UsageError("--t takes a single time here");
  return o.times.front();
}

BigTime parse_time(const std::string& text) {
  try {
    return BigTime::parse(text);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

SystemSpec build_system(const Options& o) {
  SystemSpec sys(parse_system_id(o.system));
  try {
    for (const std::string& entry : o.ic) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--ic expects name=value, got '" + entry + "'");
      }
      sys = sys.with_initial_value(entry.substr(0, eq), entry.substr(eq + 1));
    }
    if (o.p0) {
      sys = sys.with_initial_value(sys.var_names()[sys.momentum_index()],
                                   *o.p0);
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return sys;
}

// Decimal text of a time, rounded to `digits` with trailing zeros removed.
std::string time_text(const MpReal& t, int digits = 20) {
  std::string s = to_decimal(t, digits, DigitMode::nearest);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

void write_kv(std::ostream& out,
              const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

void write_csv_record(std::ostream& out,
                      const std::vector<std::pair<std::string, std::string>>& kv) {
  for (std::size_t i = 0; i < kv.size(); ++i) {
    out << (i ? "," : "") << kv[i].first;
  }
  out << '\n';
  for (std::size_t i = 0; i < kv.size(); ++i) {
    out << (i ? "," : "") << kv[i].second;
  }
  out << '\n';
}

void write_json(std::ostream& out, const nlohmann::json& j) {
  out << j.dump(2) << '\n';
}

int cmd_integrate(const Options& o, std::ostream& out) {
  const SystemSpec sys = build_system(o);
  const PrecisionContext ctx = context_for(o, kWorkingBits);
  const int order = o.order.value_or(20);
  const std::string step = o.step.value_or("0.01");
  const BigTime horizon = parse_time(single_time(o, "10"));
  const int digits = o.digits.value_or(20);
  const OutputFormat format = format_of(o);
  if (o.stride == 0) throw UsageError("--stride must be positive");
  if (o.scheme != "pmt" && o.scheme != "se2") {
    throw UsageError("unknown scheme '" + o.scheme + "' (expected pmt or se2)");
  }
  const bool pmt = o.scheme == "pmt";

  const State ic = sys.initial_state(ctx);
  const MpReal h0 = hamiltonian(sys, ic);
  std::vector<std::string> rows;
  const auto record = [&](const State& s) {
    std::string line = time_text(s.t, digits);
    for (const MpReal& v : s.vars) line += "," + to_decimal(v, digits, DigitMode::nearest);
    line += "," + to_scientific(delta_h(sys, s, h0), 6);
    rows.push_back(std::move(line));
  };
  if (format == OutputFormat::csv) record(ic);
  const Observer observer = [&](std::uint64_t k, const State& s) {
    if (format == OutputFormat::csv && k % o.stride == 0) record(s);
  };

  RunStats stats{0, MpReal(ctx), ic};
  if (pmt) {
    RunConfig config = RunConfig::make(sys, order, step, horizon, ctx);
    config.validate();
    stats = integrate(config, observer);
  } else {
    stats = se2_integrate(
        Se2Config::make(sys, step, horizon, ctx,
                        o.hardware ? Arithmetic::hardware
                                   : Arithmetic::multiprecision),
        observer);
  }

  const State& end = stats.final_state;
  if (format == OutputFormat::csv) {
    out << "t";
    for (const std::string& name : sys.var_names()) out << ',' << name;
    out << ",deltaH\n";
    for (const std::string& line : rows) out << line << '\n';
    return kExitOk;
  }
  std::vector<std::pair<std::string, std::string>> kv{
      {"system", std::string(sys.name())},
      {"scheme", o.scheme},
  };
  if (pmt) kv.emplace_back("order", std::to_string(order));
  kv.emplace_back("step", step);
  kv.emplace_back("bits", std::to_string(ctx.bits()));
  kv.emplace_back("t", time_text(end.t, digits));
  kv.emplace_back("loops", std::to_string(stats.loops));
  if (format == OutputFormat::text) {
    for (std::size_t v = 0; v < end.vars.size(); ++v) {
      kv.emplace_back(sys.var_names()[v],
                      to_decimal(end.vars[v], digits, DigitMode::nearest));
    }
    kv.emplace_back("max_abs_dH", to_scientific(stats.max_abs_dh, 3));
    write_kv(out, kv);
    return kExitOk;
  }
  nlohmann::json j(nlohmann::json::value_t::object);
  for (const auto& [k, v] : kv) j[k] = v;
  j["loops"] = stats.loops;
  j["order"] = order;
  j["bits"] = ctx.bits();
  if (!pmt) j.erase("order");
  nlohmann::json vars(nlohmann::json::value_t::object);
  for (std::size_t v = 0; v < end.vars.size(); ++v) {
    vars[sys.var_names()[v]] =
        to_decimal(end.vars[v], digits, DigitMode::nearest);
  }
  j["vars"] = vars;
  j["max_abs_dH"] = to_scientific(stats.max_abs_dh, 3);
  write_json(out, j);
  return kExitOk;
}

int cmd_period(const Options& o, std::ostream& out) {
  const SystemSpec sys = build_system(o);
  const PrecisionContext ctx =
      context_for(o, PrecisionContext::kPeriodDefaultBits);
  const int order = o.order.value_or(200);
  const std::string step = o.step.value_or("0.01");
  const int digits = o.digits.value_or(30);
  if (digits < 1) throw UsageError("--digits must be positive");
  const OutputFormat format = format_of(o);

  PeriodOptions options;
  options.max_steps = o.max_steps;
  const MpReal h0 = MpReal::parse(step, ctx);
  const PeriodResult r = period(sys, h0, order, digits, ctx, options);

  std::vector<std::pair<std::string, std::string>> kv{
      {"system", std::string(sys.name())},
      {"T", to_decimal(r.period, std::max(1, r.verified_digits))},
      {"verified_digits", std::to_string(r.verified_digits)},
      {"loops_stage1", std::to_string(r.loops_stage1)},
      {"loops_stage2", std::to_string(r.loops_stage2)},
      {"width", to_scientific(r.width, 3)},
  };
  if (o.position_error) {
    const MpReal ex = MpReal::parse(*o.position_error, ctx);
    kv.emplace_back("dT", to_scientific(period_uncertainty(ex, sys, r, h0,
                                                           order, ctx),
                                        3));
  }
  switch (format) {
    case OutputFormat::text:
      write_kv(out, kv);
      break;
    case OutputFormat::csv:
      write_csv_record(out, kv);
      break;
    case OutputFormat::json: {
      nlohmann::json j(nlohmann::json::value_t::object);
      for (const auto& [k, v] : kv) j[k] = v;
      j["verified_digits"] = r.verified_digits;
      j["loops_stage1"] = r.loops_stage1;
      j["loops_stage2"] = r.loops_stage2;
      j["order"] = order;
      j["step"] = step;
      j["bits"] = ctx.bits();
      write_json(out, j);
      break;
    }
  }
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const SystemSpec sys = build_system(o);
  const BigTime t = parse_time(single_time(o, std::nullopt));
  const int order = o.order.value_or(200);
  const std::string step = o.step.value_or("0.01");
  const OutputFormat format = format_of(o);

  const PrecisionContext ctx =
      context_for(o, PrecisionContext::kPeriodDefaultBits);
  const PeriodResult period_result =
      o.period ? period_from_decimal(*o.period, ctx)
               : period(sys, MpReal::parse(step, ctx), order,
                        o.digits.value_or(100), ctx);
  const EvaluationConfig config = EvaluationConfig::defaults(
      order, step, period_result.period, o.target_error);
  const Evaluation ev = evaluate_at(sys, t, period_result, config);
  const int shown = std::max(1, ev.verified_digits);

  std::vector<std::pair<std::string, std::string>> vars;
  for (std::size_t v = 0; v < ev.state.vars.size(); ++v) {
    vars.emplace_back(sys.var_names()[v], to_decimal(ev.state.vars[v], shown));
  }
  const std::string residual = to_decimal(ev.reduction.residual, 30);

  switch (format) {
    case OutputFormat::text: {
      std::vector<std::pair<std::string, std::string>> kv{
          {"system", std::string(sys.name())},
          {"t", t.to_string()},
          {"k", ev.reduction.k.get_str()},
          {"T_r", residual}};
      kv.insert(kv.end(), vars.begin(), vars.end());
      kv.emplace_back("verified_digits", std::to_string(ev.verified_digits));
      write_kv(out, kv);
      break;
    }
    case OutputFormat::csv: {
      std::vector<std::pair<std::string, std::string>> kv{
          {"t", t.to_string()},
          {"k", ev.reduction.k.get_str()},
          {"T_r", residual}};
      kv.insert(kv.end(), vars.begin(), vars.end());
      kv.emplace_back("verified_digits", std::to_string(ev.verified_digits));
      write_csv_record(out, kv);
      break;
    }
    case OutputFormat::json: {
      nlohmann::json j_vars(nlohmann::json::value_t::object);
      for (const auto& [name, value] : vars) j_vars[name] = value;
      const nlohmann::json j = {{"system", std::string(sys.name())},
                                {"t", t.to_string()},
                                {"k", ev.reduction.k.get_str()},
                                {"T_r", residual},
                                {"vars", j_vars},
                                {"verified_digits", ev.verified_digits}};
      write_json(out, j);
      break;
    }
  }
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const SystemSpec sys = build_system(o);
  const PrecisionContext ctx = context_for(o, kWorkingBits);
  const int order = o.order.value_or(20);
  const std::string step = o.step.value_or("0.01");
  const int digits = o.digits.value_or(15);
  const std::vector<std::string> times =
      o.times.empty() ? std::vector<std::string>{"10", "100", "1000"}
                      : o.times;

  Table table{"compare",
              "SE2 vs PMT (order " + std::to_string(order) + ") for " +
                  std::string(sys.name()) + ", h = " + step,
              {"t"},
              {},
              false};
  for (const std::string& name : sys.var_names()) {
    table.columns.push_back(name + "_SE2");
    table.columns.push_back(name + "_PMT");
  }
  table.columns.emplace_back("agreed_digits");
  for (const std::string& text : times) {
    const BigTime t = parse_time(text);
    const RunStats pmt = integrate(RunConfig::make(sys, order, step, t, ctx));
    const RunStats se2 = se2_integrate(Se2Config::make(
        sys, step, t, ctx,
        o.hardware ? Arithmetic::hardware : Arithmetic::multiprecision));
    TableRow row{{t.to_string()}, RowStatus::info};
    int agreed = digits_capacity(ctx.bits());
    for (std::size_t v = 0; v < sys.dimension(); ++v) {
      row.cells.push_back(to_decimal(se2.final_state.vars[v], digits,
                                     DigitMode::nearest));
      row.cells.push_back(to_decimal(pmt.final_state.vars[v], digits,
                                     DigitMode::nearest));
      agreed = std::min(agreed, agreed_digits(se2.final_state.vars[v],
                                              pmt.final_state.vars[v]));
    }
    row.cells.push_back(std::to_string(agreed));
    table.rows.push_back(std::move(row));
  }
  write_table(out, table, format_of(o));
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const SystemSpec sys = build_system(o);
  const PrecisionContext ctx = context_for(o, kWorkingBits);
  const int order = o.order.value_or(20);
  const std::string step = o.step.value_or("0.01");
  const BigTime t = parse_time(single_time(o, "10"));
  if (o.delta < 1) throw UsageError("--delta must be positive");
  const int agreed =
      self_verify(RunConfig::make(sys, order, step, t, ctx), o.delta);

  const std::vector<std::pair<std::string, std::string>> kv{
      {"system", std::string(sys.name())},
      {"t", t.to_string()},
      {"order", std::to_string(order)},
      {"check_order", std::to_string(order + o.delta)},
      {"bits", std::to_string(ctx.bits())},
      {"agreed_digits", std::to_string(agreed)},
  };
  switch (format_of(o)) {
    case OutputFormat::text:
      write_kv(out, kv);
      break;
    case OutputFormat::csv:
      write_csv_record(out, kv);
      break;
    case OutputFormat::json:
      write_json(out, {{"system", std::string(sys.name())},
                       {"t", t.to_string()},
                       {"order", order},
                       {"check_order", order + o.delta},
                       {"bits", ctx.bits()},
                       {"agreed_digits", agreed}});
      break;
  }
  return kExitOk;
}

int cmd_tables(const Options& o, std::ostream& out, std::ostream& err) {
  TableOptions options;
  options.period_order = o.order.value_or(options.period_order);
  options.period_step = o.step.value_or(options.period_step);
  options.period_bits =
      context_for(o, PrecisionContext::kPeriodDefaultBits).bits();
  options.extended = o.extended;
  const OutputFormat format = format_of(o);

  std::vector<int> which = o.tables.empty() ? std::vector<int>{1, 2, 4, 5}
                                            : o.tables;
  for (int id : which) {
    if (id != 1 && id != 2 && id != 4 && id != 5) {
      throw UsageError("no table " + std::to_string(id) +
                       " (available: 1, 2, 4, 5)");
    }
  }
  Reproduction reproduction(options);
  std::vector<Table> tables;
  bool passed = true;
  for (std::size_t i = 0; i < which.size(); ++i) {
    err << "running table " << which[i] << '\n';
    Table table = which[i] == 1   ? reproduction.morse_period_table()
                  : which[i] == 2 ? reproduction.pi_reduction_table()
                  : which[i] == 4 ? reproduction.morse_momentum_table()
                                  : reproduction.pendulum_period_table();
    passed = passed && table.passed();
    if (format != OutputFormat::json) {
      if (i > 0 && format == OutputFormat::text) out << '\n';
      write_table(out, table, format);
      out.flush();
    }
    tables.push_back(std::move(table));
  }
  if (format == OutputFormat::json) write_tables(out, tables, format);
  return passed ? kExitOk : kExitMismatch;
}

int cmd_figures(const Options& o, std::ostream& out) {
  FigureOptions options;
  options.horizon = single_time(o, options.horizon);
  parse_time(options.horizon);
  options.bits = context_for(o, options.bits).bits();
  options.order = o.order.value_or(options.order);
  options.max_rows = o.max_rows;
  if (options.max_rows == 0) throw UsageError("--max-rows must be positive");
  for (const auto& path : write_figures(o.outdir, options)) {
    out << path.string() << '\n';
  }
  return kExitOk;
}

// key=value lines from a config file become --key=value tokens placed right
// after the subcommand, so explicit flags later on the line take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file " + *path);
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(*path + ":" + std::to_string(number) +
                       ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (key == "config") continue;
    if (value == "true" && (key == "json" || key == "extended" ||
                            key == "hardware")) {
      tokens.push_back("--" + key);
    } else {
      tokens.push_back("--" + key + "=" + value);
    }
  }
  std::vector<std::string> out = args;
  const auto command = std::find_if(out.begin(), out.end(), [](const auto& a) {
    return !a.empty() && a.front() != '-';
  });
  out.insert(command == out.end() ? out.end() : command + 1, tokens.begin(),
             tokens.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Multiple-precision Taylor integration and forward period "
               "analysis of periodic Hamiltonian systems.",
               "periodica"};
  // -h is free for the step option; help stays on --help.
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Options o;
  const auto add_system = [&](CLI::App* sub) {
    sub->add_option("--system", o.system,
                    "morse, pendulum, harmonic or nonseparable")
        ->capture_default_str();
    sub->add_option("--ic", o.ic, "initial value override, name=value")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--p0", o.p0, "initial momentum");
  };
  const auto add_numerics = [&](CLI::App* sub, const std::string& order,
                                const std::string& bits) {
    sub->add_option("-M,--M,--order", o.order, "Taylor order [" + order + "]");
    sub->add_option("--h,--step", o.step, "grid step [0.01]");
    sub->add_option("--bits", o.bits,
                    "mantissa bits [" + bits + ", or $" + kDefaultBitsEnv +
                        "]");
  };
  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "text, csv or json")
        ->capture_default_str();
    sub->add_flag("--json", o.json, "same as --format json");
    sub->add_option("--output", o.output, "write to this file");
    sub->add_option("--config", o.config, "key=value file mirroring flags");
  };
  const auto add_time = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--t", o.times, help)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  };

  CLI::App* integrate_cmd =
      app.add_subcommand("integrate", "fixed-step integration to time t");
  add_system(integrate_cmd);
  add_numerics(integrate_cmd, "20", std::to_string(kWorkingBits));
  add_time(integrate_cmd, "final time [10]");
  add_output(integrate_cmd);
  integrate_cmd->add_option("--scheme", o.scheme, "pmt or se2")
      ->capture_default_str();
  integrate_cmd->add_flag("--hardware", o.hardware,
                          "run SE2 in double precision");
  integrate_cmd->add_option("--stride", o.stride, "CSV row stride")
      ->capture_default_str();
  integrate_cmd->add_option("--digits", o.digits,
                            "significant digits printed [20]");

  CLI::App* period_cmd =
      app.add_subcommand("period", "period by forward period analysis");
  add_system(period_cmd);
  add_numerics(period_cmd, "200", "2000");
  add_output(period_cmd);
  period_cmd->add_option("--digits", o.digits, "target digits [30]");
  period_cmd->add_option("--max-steps", o.max_steps, "stage-1 step limit")
      ->capture_default_str();
  period_cmd->add_option("--position-error", o.position_error,
                         "also report dT = E_x / sigma(p)");

  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "state at a huge time by period reduction");
  add_system(evaluate_cmd);
  add_numerics(evaluate_cmd, "200", "2000");
  add_time(evaluate_cmd, "evaluation time, e.g. 1e60 (required)");
  add_output(evaluate_cmd);
  evaluate_cmd->add_option("--digits", o.digits, "period digits [100]");
  evaluate_cmd->add_option("--period", o.period,
                           "use this decimal period instead of FPA");
  evaluate_cmd->add_option("--error", o.target_error, "target output error")
      ->capture_default_str();

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "SE2 against PMT at several times");
  add_system(compare_cmd);
  add_numerics(compare_cmd, "20", std::to_string(kWorkingBits));
  add_time(compare_cmd, "times, repeatable [10 100 1000]");
  add_output(compare_cmd);
  compare_cmd->add_flag("--hardware", o.hardware,
                        "run SE2 in double precision");
  compare_cmd->add_option("--digits", o.digits,
                          "significant digits printed [15]");

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "agreed digits between orders M and M + delta");
  add_system(verify_cmd);
  add_numerics(verify_cmd, "20", std::to_string(kWorkingBits));
  add_time(verify_cmd, "final time [10]");
  add_output(verify_cmd);
  verify_cmd->add_option("--delta", o.delta, "order increment")
      ->capture_default_str();

  CLI::App* tables_cmd = app.add_subcommand(
      "tables", "reproduce the reference tables with pass/fail markers");
  add_numerics(tables_cmd, "200", "2000");
  add_output(tables_cmd);
  tables_cmd->add_option("--table", o.tables, "subset of 1, 2, 4, 5")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  tables_cmd->add_flag("--extended", o.extended,
                       "include direct runs to t = 1e7 (hours)");

  CLI::App* figures_cmd =
      app.add_subcommand("figures", "write figure data as CSV files");
  figures_cmd->add_option("-M,--M,--order", o.order, "Taylor order [20]");
  figures_cmd->add_option("--bits", o.bits, "mantissa bits [128]");
  add_time(figures_cmd, "horizon of the fig1 panels [1e4]");
  figures_cmd->add_option("--outdir", o.outdir, "output directory")
      ->capture_default_str();
  figures_cmd->add_option("--max-rows", o.max_rows,
                          "row limit for long-horizon files")
      ->capture_default_str();
  figures_cmd->add_option("--config", o.config,
                          "key=value file mirroring flags");

  const auto usage_failure = [&](const std::string& message) {
    err << "error: " << message << "\n\n";
    CLI::App* active = &app;
    for (CLI::App* sub : app.get_subcommands()) active = sub;
    err << active->help();
    return kExitUsage;
  };

  try {
    std::vector<std::string> reversed = expand_config(args);
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    return usage_failure(e.what());
  } catch (const UsageError& e) {
    return usage_failure(e.what());
  }

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) return usage_failure("cannot write " + o.output);
  }
  std::ostream& sink = o.output.empty() ? out : file;

  try {
    if (integrate_cmd->parsed()) return cmd_integrate(o, sink);
    if (period_cmd->parsed()) return cmd_period(o, sink);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, sink);
    if (compare_cmd->parsed()) return cmd_compare(o, sink);
    if (verify_cmd->parsed()) return cmd_verify(o, sink);
    if (tables_cmd->parsed()) return cmd_tables(o, sink, err);
    return cmd_figures(o, sink);
  } catch (const UsageError& e) {
    return usage_failure(e.what());
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace periodica::cli
