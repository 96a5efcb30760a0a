#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colearn {

/// A header-plus-rows text table. Fields are kept as strings; typed access
/// goes through the parse helpers so errors carry file and line context.
class DelimitedTable {
 public:
  DelimitedTable() = default;
  explicit DelimitedTable(std::vector<std::string> header, char delimiter = ',');

  static DelimitedTable read(const std::filesystem::path& path, char delimiter = ',');
  static DelimitedTable parse(std::istream& in, std::string source, char delimiter = ',');

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t r) const { return rows_[r]; }
  const std::string& source() const { return source_; }
  /// 1-based line number of row `r` in the source file.
  std::size_t line_of(std::size_t r) const { return lines_[r]; }

  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;

  void add_row(std::vector<std::string> fields);
  void write(std::ostream& out) const;
  std::string to_string() const;

  /// "file:line" for diagnostics.
  std::string where(std::size_t r) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
  std::string source_;
  char delimiter_ = ',';
};

long long parse_integer(std::string_view text, std::string_view context);
double parse_real(std::string_view text, std::string_view context);
/// Empty (or "NA") fields parse to nullopt.
std::optional<long long> parse_optional_integer(std::string_view text, std::string_view context);
std::optional<double> parse_optional_real(std::string_view text, std::string_view context);

/// Shortest decimal text that reads back to the identical double.
std::string format_exact(double value);
/// Fixed significant-digit rendering for reports; NaN renders as "NA".
std::string format_real(double value, int significant = 10);

std::string read_file(const std::filesystem::path& path);

}  // namespace colearn
