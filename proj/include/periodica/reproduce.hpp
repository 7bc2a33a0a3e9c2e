#pragma once

// Reproduction of the reference tables and figure data.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "periodica/fpa.hpp"
#include "periodica/mp.hpp"

namespace periodica {

enum class RowStatus { pass, fail, info };

std::string_view to_string(RowStatus status);

struct TableRow {
  std::vector<std::string> cells;
  RowStatus status;
};

struct Table {
  std::string id;
  std::string title;
  std::vector<std::string> columns;  // the status column is implicit
  std::vector<TableRow> rows;
  bool graded = true;  // false omits the status column

  bool passed() const;
};

enum class OutputFormat { text, csv, json };

OutputFormat parse_output_format(std::string_view name);

void write_table(std::ostream& out, const Table& table, OutputFormat format);
void write_tables(std::ostream& out, const std::vector<Table>& tables,
                  OutputFormat format);

struct TableOptions {
  int period_order = 200;
  std::string period_step = "0.01";
  long period_bits = PrecisionContext::kPeriodDefaultBits;
  int direct_order = 20;
  std::string direct_step = "0.01";
  long direct_bits = 256;
  /// Adds the direct runs to t = 1e7, which take hours.
  bool extended = false;
};

/// Runs the table pipelines, sharing the Morse period between tables.
class Reproduction {
 public:
  explicit Reproduction(TableOptions options);

  Table morse_period_table();     // 30 and 100 digits
  Table pi_reduction_table();     // k and T_r for t = 1e30
  Table morse_momentum_table();   // p(t) by SE2, direct PMT and FPA
  Table pendulum_period_table();  // 50 digits for nine initial momenta

  /// Morse period at `digits`, refined from one shared stage-1 bracket.
  PeriodResult morse_period(int digits);

 private:
  const CheckedBracket& morse_brackets();

  TableOptions options_;
  std::optional<CheckedBracket> morse_;
};

struct FigureOptions {
  std::string horizon = "1e4";  // fig1 panels
  long bits = 128;
  int order = 20;
  /// Upper bound on rows per long-horizon file.
  std::uint64_t max_rows = 10000;
};

/// Writes fig1a..fig1e, fig2, fig3a and fig3b CSV files into `dir` and
/// returns their paths.
std::vector<std::filesystem::path> write_figures(
    const std::filesystem::path& dir, const FigureOptions& options);

}  // namespace periodica
