#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gffexc/config.hpp"

namespace gffexc {

/// Library version string.
std::string_view version();

/// Subcommands accepted by run().
const std::vector<std::string_view>& subcommands();

/// CSV table built in memory and written in one piece.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& operator<<(double value);
  CsvTable& operator<<(std::int64_t value);
  CsvTable& operator<<(std::size_t value);
  CsvTable& operator<<(int value);
  CsvTable& operator<<(std::string_view value);
  /// Ends the current row; throws if it has the wrong number of cells.
  void end_row();

  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  void cell(std::string_view text);

  std::size_t columns_;
  std::size_t filled_ = 0;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

struct RunSummary {
  int exit_code = 0;
  std::vector<std::string> failures;               // hard assertions that failed
  std::vector<std::string> notes;                  // non-blocking observations
  std::map<std::string, std::size_t> table_rows;   // file name -> data rows
};

/// Executes one subcommand, writing CSV tables and manifest.txt into
/// config.out. `check` selects a single stats check (empty = config.checks).
/// Exit code 0 iff every hard assertion passed; 2 on invalid usage.
RunSummary run(const ExperimentConfig& config, std::string_view subcommand, std::string_view check,
               std::ostream& log);

}  // namespace gffexc
