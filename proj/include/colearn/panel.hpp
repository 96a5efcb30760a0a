#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "colearn/table.hpp"

namespace colearn {

/// Dense row-major matrix used for all province x industry and
/// industry x industry quantities.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Two-level industry classification code, e.g. sector 'C', subsector 27.
struct IndustryCode {
  char sector = 'A';
  int subsector = 0;

  std::string label() const;  // "C27"
  friend bool operator==(const IndustryCode&, const IndustryCode&) = default;
};

struct Province {
  int id = 0;
  std::string abbreviation;
  std::string name;
};

struct Industry {
  IndustryCode code;
  std::string name;
};

/// Provinces in registry order (the row order of every province-indexed output).
class ProvinceRegistry {
 public:
  ProvinceRegistry() = default;
  explicit ProvinceRegistry(std::vector<Province> provinces);

  /// provinces.csv: id, abbreviation, name
  static ProvinceRegistry read(const std::filesystem::path& path);
  DelimitedTable to_table() const;

  std::size_t size() const { return provinces_.size(); }
  const Province& operator[](std::size_t i) const { return provinces_[i]; }
  std::optional<std::size_t> find(std::string_view abbreviation) const;
  std::size_t index_of(std::string_view abbreviation) const;  // throws InputError
  std::vector<std::string> labels() const;

 private:
  std::vector<Province> provinces_;
};

/// Industries in registry order. Subsector numbers are unique and each one
/// belongs to exactly one sector.
class IndustryRegistry {
 public:
  IndustryRegistry() = default;
  explicit IndustryRegistry(std::vector<Industry> industries);

  /// industries.csv: sector, subsector, name
  static IndustryRegistry read(const std::filesystem::path& path);
  DelimitedTable to_table() const;

  std::size_t size() const { return industries_.size(); }
  const Industry& operator[](std::size_t a) const { return industries_[a]; }
  std::optional<std::size_t> find(const IndustryCode& code) const;
  std::optional<std::size_t> find_subsector(int subsector) const;
  std::vector<std::string> labels() const;

 private:
  std::vector<Industry> industries_;
};

/// Inclusive contiguous range of calendar years.
struct YearRange {
  int first = 0;
  int last = -1;

  std::size_t size() const { return last >= first ? static_cast<std::size_t>(last - first + 1) : 0; }
  bool contains(int year) const { return year >= first && year <= last; }
  std::size_t index(int year) const;  // throws std::out_of_range
  friend bool operator==(const YearRange&, const YearRange&) = default;
};

/// Firm counts x[province][industry][year].
class PanelTensor {
 public:
  PanelTensor() = default;
  PanelTensor(std::size_t provinces, std::size_t industries, YearRange years);

  std::size_t provinces() const { return provinces_; }
  std::size_t industries() const { return industries_; }
  const YearRange& years() const { return years_; }

  std::int64_t count(std::size_t i, std::size_t a, int year) const;
  void set(std::size_t i, std::size_t a, int year, std::int64_t value);
  void add(std::size_t i, std::size_t a, int year, std::int64_t delta);

  /// Province x industry counts for one year.
  Matrix slice(int year) const;
  std::int64_t total(int year) const;

  friend bool operator==(const PanelTensor&, const PanelTensor&) = default;

 private:
  std::size_t offset(std::size_t i, std::size_t a, int year) const;

  std::size_t provinces_ = 0;
  std::size_t industries_ = 0;
  YearRange years_;
  std::vector<std::int64_t> counts_;  // [year][province][industry]
};

/// Pooled revenue and employees per cell; productivity is their ratio and is
/// missing exactly when the cell has no employees.
class ProductivityTensor {
 public:
  ProductivityTensor() = default;
  ProductivityTensor(std::size_t provinces, std::size_t industries, YearRange years);

  std::size_t provinces() const { return provinces_; }
  std::size_t industries() const { return industries_; }
  const YearRange& years() const { return years_; }

  void add(std::size_t i, std::size_t a, int year, double revenue, double employees);
  void set(std::size_t i, std::size_t a, int year, double revenue, double employees);
  double revenue(std::size_t i, std::size_t a, int year) const;
  double employees(std::size_t i, std::size_t a, int year) const;
  std::optional<double> productivity(std::size_t i, std::size_t a, int year) const;

  friend bool operator==(const ProductivityTensor&, const ProductivityTensor&) = default;

 private:
  std::size_t offset(std::size_t i, std::size_t a, int year) const;

  std::size_t provinces_ = 0;
  std::size_t industries_ = 0;
  YearRange years_;
  std::vector<double> revenue_;
  std::vector<double> employees_;
};

struct IngestDiagnostics {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
  std::size_t observations_outside_listing = 0;
  std::size_t missing_employees = 0;
  std::size_t missing_revenue = 0;
  std::vector<std::string> messages;
};

struct FirmPanel {
  PanelTensor counts;
  ProductivityTensor productivity;
  IngestDiagnostics diagnostics;
};

/// A firm counts in year t iff list_year <= t and it has no delisting year or
/// delist_year > t. Rows with unknown province/industry are rejected with a
/// diagnostic; inconsistent firm attributes or delist < list throw InputError.
FirmPanel ingest_firms(const DelimitedTable& firms, const ProvinceRegistry& provinces,
                       const IndustryRegistry& industries,
                       std::optional<YearRange> years = std::nullopt);
FirmPanel ingest_firms(const std::filesystem::path& path, const ProvinceRegistry& provinces,
                       const IndustryRegistry& industries,
                       std::optional<YearRange> years = std::nullopt);

/// Aggregated panel: province, sector, subsector, year, firms, revenue, employees.
/// Written values round-trip bit-exactly through read_panel_table.
DelimitedTable panel_table(const FirmPanel& panel, const ProvinceRegistry& provinces,
                           const IndustryRegistry& industries);
FirmPanel read_panel_table(const DelimitedTable& table, const ProvinceRegistry& provinces,
                           const IndustryRegistry& industries);

/// Symmetric pairwise province distances. Only the upper triangle is stored.
class DistanceTable {
 public:
  enum class Metric { Geographic, Driving, Hops, TransitTime, TrainTime, DriveTime };

  DistanceTable() = default;
  explicit DistanceTable(std::size_t provinces);

  static DistanceTable from_table(const DelimitedTable& table, const ProvinceRegistry& provinces);
  static DistanceTable read(const std::filesystem::path& path, const ProvinceRegistry& provinces);
  DelimitedTable to_table(const ProvinceRegistry& provinces) const;

  std::size_t provinces() const { return provinces_; }
  double get(Metric metric, std::size_t i, std::size_t j) const;
  void set(Metric metric, std::size_t i, std::size_t j, double value);

  double geographic(std::size_t i, std::size_t j) const { return get(Metric::Geographic, i, j); }
  double hops(std::size_t i, std::size_t j) const { return get(Metric::Hops, i, j); }
  /// Adjacent provinces share a border: hops == 1.
  bool adjacent(std::size_t i, std::size_t j) const { return i != j && hops(i, j) == 1.0; }

  /// Full symmetric matrix with a zero diagonal.
  Matrix matrix(Metric metric) const;

 private:
  std::size_t pair_index(std::size_t i, std::size_t j) const;

  std::size_t provinces_ = 0;
  std::vector<double> values_[6];
};

struct MacroRecord {
  double population = 0;  // 10k persons
  double gdp_per_capita = 0;
  double urban_area = 0;  // km2
  double land_area = 0;   // km2
  double trade = 0;       // 1k USD

  double urbanization() const { return urban_area / land_area; }
};

/// Province-year macro indicators.
class MacroTable {
 public:
  MacroTable() = default;
  MacroTable(std::size_t provinces, YearRange years);

  static MacroTable from_table(const DelimitedTable& table, const ProvinceRegistry& provinces);
  static MacroTable read(const std::filesystem::path& path, const ProvinceRegistry& provinces);
  DelimitedTable to_table(const ProvinceRegistry& provinces) const;

  const YearRange& years() const { return years_; }
  bool has(std::size_t i, int year) const;
  const MacroRecord& at(std::size_t i, int year) const;  // throws InputError when absent
  void set(std::size_t i, int year, const MacroRecord& record);

 private:
  std::size_t provinces_ = 0;
  YearRange years_;
  std::vector<std::optional<MacroRecord>> records_;
};

/// High-speed rail connection year per province pair (none = never connected).
class RailTable {
 public:
  RailTable() = default;
  explicit RailTable(std::size_t provinces);

  static RailTable from_table(const DelimitedTable& table, const ProvinceRegistry& provinces);
  static RailTable read(const std::filesystem::path& path, const ProvinceRegistry& provinces);
  DelimitedTable to_table(const ProvinceRegistry& provinces) const;

  std::size_t provinces() const { return provinces_; }
  std::optional<int> connection_year(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, std::optional<int> year);
  /// True when the pair was connected in or before `as_of`. The diagonal is never connected.
  bool connected(std::size_t i, std::size_t j, int as_of) const;

 private:
  std::size_t pair_index(std::size_t i, std::size_t j) const;

  std::size_t provinces_ = 0;
  std::vector<std::optional<int>> years_;
};

}  // namespace colearn
