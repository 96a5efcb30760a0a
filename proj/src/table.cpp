#include "colearn/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "colearn/error.hpp"

namespace colearn {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    fields.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool is_missing(std::string_view text) { return text.empty() || text == "NA"; }

}  // namespace

DelimitedTable::DelimitedTable(std::vector<std::string> header, char delimiter)
    : header_(std::move(header)), delimiter_(delimiter) {}

DelimitedTable DelimitedTable::read(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path.string());
  return parse(in, path.string(), delimiter);
}

DelimitedTable DelimitedTable::parse(std::istream& in, std::string source, char delimiter) {
  DelimitedTable table;
  table.source_ = std::move(source);
  table.delimiter_ = delimiter;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = split(content, delimiter);
    if (!have_header) {
      table.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw InputError(table.source_ + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header_.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    table.rows_.push_back(std::move(fields));
    table.lines_.push_back(line_no);
  }
  if (!have_header) throw InputError(table.source_ + ": missing header row");
  return table;
}

std::optional<std::size_t> DelimitedTable::find_column(std::string_view name) const {
  for (std::size_t c = 0; c < header_.size(); ++c)
    if (header_[c] == name) return c;
  return std::nullopt;
}

std::size_t DelimitedTable::column(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw InputError(source_ + ": missing column '" + std::string(name) + "'");
}

void DelimitedTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size())
    throw std::invalid_argument("DelimitedTable::add_row: field count mismatch");
  rows_.push_back(std::move(fields));
  lines_.push_back(rows_.size() + 1);
}

void DelimitedTable::write(std::ostream& out) const {
  auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c) out << delimiter_;
      out << fields[c];
    }
    out << '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
}

std::string DelimitedTable::to_string() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::string DelimitedTable::where(std::size_t r) const {
  return source_ + ":" + std::to_string(lines_[r]);
}

long long parse_integer(std::string_view text, std::string_view context) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw InputError(std::string(context) + ": expected integer, found '" + std::string(text) + "'");
  return value;
}

double parse_real(std::string_view text, std::string_view context) {
  double value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw InputError(std::string(context) + ": expected number, found '" + std::string(text) + "'");
  return value;
}

std::optional<long long> parse_optional_integer(std::string_view text, std::string_view context) {
  if (is_missing(text)) return std::nullopt;
  return parse_integer(text, context);
}

std::optional<double> parse_optional_real(std::string_view text, std::string_view context) {
  if (is_missing(text)) return std::nullopt;
  return parse_real(text, context);
}

std::string format_exact(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_real(double value, int significant) {
  if (std::isnan(value)) return "NA";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace colearn
