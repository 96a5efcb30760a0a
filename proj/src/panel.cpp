#include "colearn/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "colearn/error.hpp"

namespace colearn {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

std::size_t upper_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  // Row-major strict upper triangle.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

IndustryCode parse_code(std::string_view sector, std::string_view subsector, std::string_view ctx) {
  if (sector.size() != 1 || sector[0] < 'A' || sector[0] > 'Z')
    throw InputError(std::string(ctx) + ": sector must be a single uppercase letter, found '" +
                     std::string(sector) + "'");
  const auto sub = parse_integer(subsector, ctx);
  if (sub < 0 || sub > 99)
    throw InputError(std::string(ctx) + ": subsector must be a two-digit code");
  return {sector[0], static_cast<int>(sub)};
}

std::string two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

}  // namespace

std::string IndustryCode::label() const { return std::string(1, sector) + two_digits(subsector); }

// ---------------------------------------------------------------------------
// Registries

ProvinceRegistry::ProvinceRegistry(std::vector<Province> provinces) : provinces_(std::move(provinces)) {
  std::set<std::string> seen;
  for (std::size_t k = 0; k < provinces_.size(); ++k) {
    const auto& p = provinces_[k];
    if (p.id != static_cast<int>(k) + 1)
      throw InputError("province ids must be dense 1..P in order; '" + p.abbreviation + "' has id " +
                       std::to_string(p.id));
    if (p.abbreviation.empty()) throw InputError("province " + std::to_string(p.id) + " has no abbreviation");
    if (!seen.insert(p.abbreviation).second)
      throw InputError("duplicate province abbreviation '" + p.abbreviation + "'");
  }
}

ProvinceRegistry ProvinceRegistry::read(const std::filesystem::path& path) {
  const auto table = DelimitedTable::read(path);
  const auto c_id = table.column("id");
  const auto c_abbr = table.column("abbreviation");
  const auto c_name = table.column("name");
  std::vector<Province> provinces;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    provinces.push_back({static_cast<int>(parse_integer(row[c_id], table.where(r))), row[c_abbr], row[c_name]});
  }
  std::sort(provinces.begin(), provinces.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return ProvinceRegistry(std::move(provinces));
}

DelimitedTable ProvinceRegistry::to_table() const {
  DelimitedTable t({"id", "abbreviation", "name"});
  for (const auto& p : provinces_) t.add_row({std::to_string(p.id), p.abbreviation, p.name});
  return t;
}

std::optional<std::size_t> ProvinceRegistry::find(std::string_view abbreviation) const {
  for (std::size_t k = 0; k < provinces_.size(); ++k)
    if (provinces_[k].abbreviation == abbreviation) return k;
  return std::nullopt;
}

std::size_t ProvinceRegistry::index_of(std::string_view abbreviation) const {
  if (auto k = find(abbreviation)) return *k;
  throw InputError("unknown province '" + std::string(abbreviation) + "'");
}

std::vector<std::string> ProvinceRegistry::labels() const {
  std::vector<std::string> out;
  for (const auto& p : provinces_) out.push_back(p.abbreviation);
  return out;
}

IndustryRegistry::IndustryRegistry(std::vector<Industry> industries) : industries_(std::move(industries)) {
  std::set<int> seen;
  for (const auto& ind : industries_) {
    if (!seen.insert(ind.code.subsector).second)
      throw InputError("subsector " + two_digits(ind.code.subsector) + " listed more than once");
  }
}

IndustryRegistry IndustryRegistry::read(const std::filesystem::path& path) {
  const auto table = DelimitedTable::read(path);
  const auto c_sector = table.column("sector");
  const auto c_sub = table.column("subsector");
  const auto c_name = table.column("name");
  std::vector<Industry> industries;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    industries.push_back({parse_code(row[c_sector], row[c_sub], table.where(r)), row[c_name]});
  }
  return IndustryRegistry(std::move(industries));
}

DelimitedTable IndustryRegistry::to_table() const {
  DelimitedTable t({"sector", "subsector", "name"});
  for (const auto& ind : industries_)
    t.add_row({std::string(1, ind.code.sector), two_digits(ind.code.subsector), ind.name});
  return t;
}

std::optional<std::size_t> IndustryRegistry::find(const IndustryCode& code) const {
  for (std::size_t a = 0; a < industries_.size(); ++a)
    if (industries_[a].code == code) return a;
  return std::nullopt;
}

std::optional<std::size_t> IndustryRegistry::find_subsector(int subsector) const {
  for (std::size_t a = 0; a < industries_.size(); ++a)
    if (industries_[a].code.subsector == subsector) return a;
  return std::nullopt;
}

std::vector<std::string> IndustryRegistry::labels() const {
  std::vector<std::string> out;
  for (const auto& ind : industries_) out.push_back(ind.code.label());
  return out;
}

std::size_t YearRange::index(int year) const {
  if (!contains(year))
    throw std::out_of_range("year " + std::to_string(year) + " outside [" + std::to_string(first) + ", " +
                            std::to_string(last) + "]");
  return static_cast<std::size_t>(year - first);
}

// ---------------------------------------------------------------------------
// Tensors

PanelTensor::PanelTensor(std::size_t provinces, std::size_t industries, YearRange years)
    : provinces_(provinces), industries_(industries), years_(years),
      counts_(provinces * industries * years.size(), 0) {}

std::size_t PanelTensor::offset(std::size_t i, std::size_t a, int year) const {
  return (years_.index(year) * provinces_ + i) * industries_ + a;
}

std::int64_t PanelTensor::count(std::size_t i, std::size_t a, int year) const {
  return counts_[offset(i, a, year)];
}

void PanelTensor::set(std::size_t i, std::size_t a, int year, std::int64_t value) {
  if (value < 0) throw std::invalid_argument("PanelTensor: negative count");
  counts_[offset(i, a, year)] = value;
}

void PanelTensor::add(std::size_t i, std::size_t a, int year, std::int64_t delta) {
  auto& c = counts_[offset(i, a, year)];
  if (c + delta < 0) throw std::invalid_argument("PanelTensor: negative count");
  c += delta;
}

Matrix PanelTensor::slice(int year) const {
  Matrix m(provinces_, industries_);
  const auto base = years_.index(year) * provinces_ * industries_;
  for (std::size_t i = 0; i < provinces_; ++i)
    for (std::size_t a = 0; a < industries_; ++a)
      m(i, a) = static_cast<double>(counts_[base + i * industries_ + a]);
  return m;
}

std::int64_t PanelTensor::total(int year) const {
  const auto base = years_.index(year) * provinces_ * industries_;
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < provinces_ * industries_; ++k) sum += counts_[base + k];
  return sum;
}

ProductivityTensor::ProductivityTensor(std::size_t provinces, std::size_t industries, YearRange years)
    : provinces_(provinces), industries_(industries), years_(years),
      revenue_(provinces * industries * years.size(), 0.0),
      employees_(provinces * industries * years.size(), 0.0) {}

std::size_t ProductivityTensor::offset(std::size_t i, std::size_t a, int year) const {
  return (years_.index(year) * provinces_ + i) * industries_ + a;
}

void ProductivityTensor::add(std::size_t i, std::size_t a, int year, double revenue, double employees) {
  const auto k = offset(i, a, year);
  revenue_[k] += revenue;
  employees_[k] += employees;
}

void ProductivityTensor::set(std::size_t i, std::size_t a, int year, double revenue, double employees) {
  const auto k = offset(i, a, year);
  revenue_[k] = revenue;
  employees_[k] = employees;
}

double ProductivityTensor::revenue(std::size_t i, std::size_t a, int year) const {
  return revenue_[offset(i, a, year)];
}

double ProductivityTensor::employees(std::size_t i, std::size_t a, int year) const {
  return employees_[offset(i, a, year)];
}

std::optional<double> ProductivityTensor::productivity(std::size_t i, std::size_t a, int year) const {
  const auto k = offset(i, a, year);
  if (employees_[k] == 0.0) return std::nullopt;
  return revenue_[k] / employees_[k];
}

// ---------------------------------------------------------------------------
// Firm ingestion

namespace {

struct FirmRecord {
  std::size_t province;
  std::size_t industry;
  int list_year;
  std::optional<int> delist_year;
  std::size_t first_row;
};

struct Observation {
  int year;
  std::optional<double> revenue;
  std::optional<double> employees;
  std::size_t row;
};

bool alive(const FirmRecord& f, int t) { return f.list_year <= t && (!f.delist_year || *f.delist_year > t); }

}  // namespace

FirmPanel ingest_firms(const DelimitedTable& firms, const ProvinceRegistry& provinces,
                       const IndustryRegistry& industries, std::optional<YearRange> years) {
  const auto c_id = firms.column("firm_id");
  const auto c_prov = firms.column("province");
  const auto c_sector = firms.column("sector");
  const auto c_sub = firms.column("subsector");
  const auto c_list = firms.column("list_year");
  const auto c_delist = firms.column("delist_year");
  const auto c_year = firms.column("year");
  const auto c_rev = firms.column("revenue");
  const auto c_emp = firms.column("employees");

  IngestDiagnostics diag;
  std::map<std::string, FirmRecord> records;
  std::map<std::string, std::vector<Observation>> observations;
  auto reject = [&](std::size_t r, const std::string& why) {
    ++diag.rows_rejected;
    diag.messages.push_back(firms.where(r) + ": rejected: " + why);
  };

  for (std::size_t r = 0; r < firms.rows(); ++r) {
    ++diag.rows_read;
    const auto& row = firms.row(r);
    const auto where = firms.where(r);
    const auto& id = row[c_id];
    if (id.empty()) throw InputError(where + ": empty firm_id");

    const auto province = provinces.find(row[c_prov]);
    if (!province) {
      reject(r, "unknown province '" + row[c_prov] + "'");
      continue;
    }
    const auto code = parse_code(row[c_sector], row[c_sub], where);
    const auto industry = industries.find_subsector(code.subsector);
    if (!industry) {
      reject(r, "unknown industry '" + code.label() + "'");
      continue;
    }
    if (industries[*industry].code.sector != code.sector) {
      reject(r, "subsector " + two_digits(code.subsector) + " belongs to sector " +
                    std::string(1, industries[*industry].code.sector) + ", not " + std::string(1, code.sector));
      continue;
    }
    const int list_year = static_cast<int>(parse_integer(row[c_list], where));
    std::optional<int> delist_year;
    if (auto d = parse_optional_integer(row[c_delist], where)) delist_year = static_cast<int>(*d);
    if (delist_year && *delist_year < list_year)
      throw InputError(where + ": firm " + id + " delisted (" + std::to_string(*delist_year) +
                       ") before listing (" + std::to_string(list_year) + ")");

    FirmRecord rec{*province, *industry, list_year, delist_year, r};
    auto [it, inserted] = records.emplace(id, rec);
    if (!inserted) {
      const auto& prev = it->second;
      if (prev.province != rec.province || prev.industry != rec.industry || prev.list_year != rec.list_year ||
          prev.delist_year != rec.delist_year)
        throw InputError(where + ": firm " + id + " attributes disagree with " + firms.where(prev.first_row));
    }

    if (auto y = parse_optional_integer(row[c_year], where)) {
      const auto revenue = parse_optional_real(row[c_rev], where);
      const auto employees = parse_optional_real(row[c_emp], where);
      if ((revenue && *revenue < 0) || (employees && *employees < 0)) {
        reject(r, "negative revenue or employees");
        continue;
      }
      observations[id].push_back({static_cast<int>(*y), revenue, employees, r});
    }
  }

  if (records.empty()) throw InputError(firms.source() + ": no valid firm records");

  if (!years) {
    YearRange range{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
    for (const auto& [id, f] : records) {
      range.first = std::min(range.first, f.list_year);
      range.last = std::max(range.last, f.list_year);
    }
    for (const auto& [id, obs] : observations)
      for (const auto& o : obs) {
        range.first = std::min(range.first, o.year);
        range.last = std::max(range.last, o.year);
      }
    years = range;
  }

  FirmPanel panel{PanelTensor(provinces.size(), industries.size(), *years),
                  ProductivityTensor(provinces.size(), industries.size(), *years), {}};

  for (const auto& [id, f] : records)
    for (int t = years->first; t <= years->last; ++t)
      if (alive(f, t)) panel.counts.add(f.province, f.industry, t, 1);

  for (auto& [id, obs] : observations) {
    const auto& f = records.at(id);
    std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const auto& o = obs[k];
      if (k > 0 && obs[k - 1].year == o.year)
        throw InputError(firms.where(o.row) + ": duplicate observation for firm " + id + " in " +
                         std::to_string(o.year));
      if (!years->contains(o.year) || !alive(f, o.year)) {
        ++diag.observations_outside_listing;
        continue;
      }
      if (!o.employees || *o.employees == 0.0) {
        ++diag.missing_employees;
        continue;
      }
      double revenue = 0.0;
      if (o.revenue) {
        revenue = *o.revenue;
      } else {
        ++diag.missing_revenue;
        diag.messages.push_back(firms.where(o.row) + ": firm " + id +
                                " has employees but no revenue; counted with zero revenue");
      }
      panel.productivity.add(f.province, f.industry, o.year, revenue, *o.employees);
    }
  }
  if (diag.missing_employees > 0)
    diag.messages.push_back(std::to_string(diag.missing_employees) +
                            " observations without employee counts excluded from productivity");

  panel.diagnostics = std::move(diag);
  return panel;
}

FirmPanel ingest_firms(const std::filesystem::path& path, const ProvinceRegistry& provinces,
                       const IndustryRegistry& industries, std::optional<YearRange> years) {
  return ingest_firms(DelimitedTable::read(path), provinces, industries, years);
}

DelimitedTable panel_table(const FirmPanel& panel, const ProvinceRegistry& provinces,
                           const IndustryRegistry& industries) {
  DelimitedTable t({"province", "sector", "subsector", "year", "firms", "revenue", "employees"});
  const auto& years = panel.counts.years();
  for (int y = years.first; y <= years.last; ++y)
    for (std::size_t i = 0; i < provinces.size(); ++i)
      for (std::size_t a = 0; a < industries.size(); ++a) {
        const auto& code = industries[a].code;
        t.add_row({provinces[i].abbreviation, std::string(1, code.sector), two_digits(code.subsector),
                   std::to_string(y), std::to_string(panel.counts.count(i, a, y)),
                   format_exact(panel.productivity.revenue(i, a, y)),
                   format_exact(panel.productivity.employees(i, a, y))});
      }
  return t;
}

FirmPanel read_panel_table(const DelimitedTable& table, const ProvinceRegistry& provinces,
                           const IndustryRegistry& industries) {
  const auto c_prov = table.column("province");
  const auto c_sector = table.column("sector");
  const auto c_sub = table.column("subsector");
  const auto c_year = table.column("year");
  const auto c_firms = table.column("firms");
  const auto c_rev = table.column("revenue");
  const auto c_emp = table.column("employees");
  if (table.rows() == 0) throw InputError(table.source() + ": empty panel");

  YearRange years{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const int y = static_cast<int>(parse_integer(table.row(r)[c_year], table.where(r)));
    years.first = std::min(years.first, y);
    years.last = std::max(years.last, y);
  }
  FirmPanel panel{PanelTensor(provinces.size(), industries.size(), years),
                  ProductivityTensor(provinces.size(), industries.size(), years), {}};
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const auto where = table.where(r);
    const auto i = provinces.find(row[c_prov]);
    if (!i) throw InputError(where + ": unknown province '" + row[c_prov] + "'");
    const auto code = parse_code(row[c_sector], row[c_sub], where);
    const auto a = industries.find(code);
    if (!a) throw InputError(where + ": unknown industry '" + code.label() + "'");
    const int y = static_cast<int>(parse_integer(row[c_year], where));
    const auto firms = parse_integer(row[c_firms], where);
    const auto revenue = parse_real(row[c_rev], where);
    const auto employees = parse_real(row[c_emp], where);
    if (firms < 0 || revenue < 0 || employees < 0) throw InputError(where + ": negative panel value");
    panel.counts.set(*i, *a, y, firms);
    panel.productivity.set(*i, *a, y, revenue, employees);
  }
  panel.diagnostics.rows_read = table.rows();
  return panel;
}

// ---------------------------------------------------------------------------
// Distances

DistanceTable::DistanceTable(std::size_t provinces) : provinces_(provinces) {
  const auto pairs = provinces * (provinces - (provinces > 0 ? 1 : 0)) / 2;
  for (auto& v : values_) v.assign(pairs, kUnset);
}

std::size_t DistanceTable::pair_index(std::size_t i, std::size_t j) const {
  if (i == j || i >= provinces_ || j >= provinces_) throw std::out_of_range("DistanceTable: invalid pair");
  return upper_index(provinces_, i, j);
}

double DistanceTable::get(Metric metric, std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return values_[static_cast<int>(metric)][pair_index(i, j)];
}

void DistanceTable::set(Metric metric, std::size_t i, std::size_t j, double value) {
  values_[static_cast<int>(metric)][pair_index(i, j)] = value;
}

Matrix DistanceTable::matrix(Metric metric) const {
  Matrix m = Matrix::Zero(provinces_, provinces_);
  for (std::size_t i = 0; i < provinces_; ++i)
    for (std::size_t j = 0; j < provinces_; ++j)
      if (i != j) m(i, j) = get(metric, i, j);
  return m;
}

namespace {
constexpr const char* kDistanceColumns[] = {"d_km", "v_km", "b_hops", "t_transit_h", "t_train_h", "t_drive_h"};
}

DistanceTable DistanceTable::from_table(const DelimitedTable& table, const ProvinceRegistry& provinces) {
  const auto n = provinces.size();
  if (n < 2) throw InputError("distance table needs at least two provinces");
  DistanceTable d(n);
  const auto c_i = table.column("i");
  const auto c_j = table.column("j");
  std::size_t cols[6];
  for (int m = 0; m < 6; ++m) cols[m] = table.column(kDistanceColumns[m]);

  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const auto where = table.where(r);
    const auto i = provinces.find(row[c_i]);
    const auto j = provinces.find(row[c_j]);
    if (!i || !j) throw InputError(where + ": unknown province in pair (" + row[c_i] + ", " + row[c_j] + ")");
    if (*i == *j) throw InputError(where + ": diagonal pair (" + row[c_i] + ", " + row[c_j] + ")");
    for (int m = 0; m < 6; ++m) {
      const double v = parse_real(row[cols[m]], where);
      if (!(v > 0))
        throw InputError(where + ": " + kDistanceColumns[m] + " must be positive for pair (" + row[c_i] + ", " +
                         row[c_j] + ")");
      if (m == static_cast<int>(Metric::Hops) &&
          (v != std::floor(v) || v < 1 || v > static_cast<double>(n - 1)))
        throw InputError(where + ": b_hops must be an integer in [1, " + std::to_string(n - 1) + "] for pair (" +
                         row[c_i] + ", " + row[c_j] + ")");
      auto& slot = d.values_[m][d.pair_index(*i, *j)];
      if (!std::isnan(slot) && slot != v)
        throw InputError(where + ": asymmetric " + std::string(kDistanceColumns[m]) + " for pair (" + row[c_i] +
                         ", " + row[c_j] + ")");
      slot = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::isnan(d.values_[0][d.pair_index(i, j)]))
        throw InputError(table.source() + ": missing pair (" + provinces[i].abbreviation + ", " +
                         provinces[j].abbreviation + ")");
  return d;
}

DistanceTable DistanceTable::read(const std::filesystem::path& path, const ProvinceRegistry& provinces) {
  return from_table(DelimitedTable::read(path), provinces);
}

DelimitedTable DistanceTable::to_table(const ProvinceRegistry& provinces) const {
  DelimitedTable t({"i", "j", "d_km", "v_km", "b_hops", "t_transit_h", "t_train_h", "t_drive_h"});
  for (std::size_t i = 0; i < provinces_; ++i)
    for (std::size_t j = i + 1; j < provinces_; ++j) {
      std::vector<std::string> row{provinces[i].abbreviation, provinces[j].abbreviation};
      for (int m = 0; m < 6; ++m) row.push_back(format_exact(values_[m][pair_index(i, j)]));
      t.add_row(std::move(row));
    }
  return t;
}

// ---------------------------------------------------------------------------
// Macro indicators

MacroTable::MacroTable(std::size_t provinces, YearRange years)
    : provinces_(provinces), years_(years), records_(provinces * years.size()) {}

bool MacroTable::has(std::size_t i, int year) const {
  return years_.contains(year) && i < provinces_ && records_[years_.index(year) * provinces_ + i].has_value();
}

const MacroRecord& MacroTable::at(std::size_t i, int year) const {
  if (!has(i, year))
    throw InputError("no macro record for province #" + std::to_string(i + 1) + " in " + std::to_string(year));
  return *records_[years_.index(year) * provinces_ + i];
}

void MacroTable::set(std::size_t i, int year, const MacroRecord& record) {
  records_[years_.index(year) * provinces_ + i] = record;
}

MacroTable MacroTable::from_table(const DelimitedTable& table, const ProvinceRegistry& provinces) {
  const auto c_prov = table.column("province");
  const auto c_year = table.column("year");
  const auto c_pop = table.column("population");
  const auto c_gdp = table.column("gdp_pc");
  const auto c_urban = table.column("urban_area");
  const auto c_land = table.column("land_area");
  const auto c_trade = table.column("trade");
  if (table.rows() == 0) throw InputError(table.source() + ": empty macro table");

  YearRange years{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const int y = static_cast<int>(parse_integer(table.row(r)[c_year], table.where(r)));
    years.first = std::min(years.first, y);
    years.last = std::max(years.last, y);
  }
  MacroTable macro(provinces.size(), years);
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const auto where = table.where(r);
    const auto i = provinces.find(row[c_prov]);
    if (!i) throw InputError(where + ": unknown province '" + row[c_prov] + "'");
    const int y = static_cast<int>(parse_integer(row[c_year], where));
    MacroRecord rec{parse_real(row[c_pop], where), parse_real(row[c_gdp], where), parse_real(row[c_urban], where),
                    parse_real(row[c_land], where), parse_real(row[c_trade], where)};
    if (rec.population < 0 || rec.gdp_per_capita < 0 || rec.urban_area < 0 || rec.trade < 0 || !(rec.land_area > 0))
      throw InputError(where + ": macro values must be non-negative and land area positive");
    if (rec.urban_area > rec.land_area) throw InputError(where + ": urban area exceeds land area");
    if (macro.has(*i, y)) throw InputError(where + ": duplicate macro record");
    macro.set(*i, y, rec);
  }
  return macro;
}

MacroTable MacroTable::read(const std::filesystem::path& path, const ProvinceRegistry& provinces) {
  return from_table(DelimitedTable::read(path), provinces);
}

DelimitedTable MacroTable::to_table(const ProvinceRegistry& provinces) const {
  DelimitedTable t({"province", "year", "population", "gdp_pc", "urban_area", "land_area", "trade"});
  for (int y = years_.first; y <= years_.last; ++y)
    for (std::size_t i = 0; i < provinces_; ++i) {
      if (!has(i, y)) continue;
      const auto& r = at(i, y);
      t.add_row({provinces[i].abbreviation, std::to_string(y), format_exact(r.population),
                 format_exact(r.gdp_per_capita), format_exact(r.urban_area), format_exact(r.land_area),
                 format_exact(r.trade)});
    }
  return t;
}

// ---------------------------------------------------------------------------
// Rail

RailTable::RailTable(std::size_t provinces)
    : provinces_(provinces), years_(provinces * (provinces - (provinces > 0 ? 1 : 0)) / 2) {}

std::size_t RailTable::pair_index(std::size_t i, std::size_t j) const {
  if (i == j || i >= provinces_ || j >= provinces_) throw std::out_of_range("RailTable: invalid pair");
  return upper_index(provinces_, i, j);
}

std::optional<int> RailTable::connection_year(std::size_t i, std::size_t j) const {
  if (i == j) return std::nullopt;
  return years_[pair_index(i, j)];
}

void RailTable::set(std::size_t i, std::size_t j, std::optional<int> year) { years_[pair_index(i, j)] = year; }

bool RailTable::connected(std::size_t i, std::size_t j, int as_of) const {
  const auto y = connection_year(i, j);
  return y && *y <= as_of;
}

RailTable RailTable::from_table(const DelimitedTable& table, const ProvinceRegistry& provinces) {
  const auto n = provinces.size();
  const auto c_i = table.column("i");
  const auto c_j = table.column("j");
  const auto c_year = table.column("connected_year");
  RailTable rail(n);
  std::vector<bool> seen(rail.years_.size(), false);
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const auto where = table.where(r);
    const auto i = provinces.find(row[c_i]);
    const auto j = provinces.find(row[c_j]);
    if (!i || !j) throw InputError(where + ": unknown province in pair (" + row[c_i] + ", " + row[c_j] + ")");
    if (*i == *j) throw InputError(where + ": diagonal pair (" + row[c_i] + ", " + row[c_j] + ")");
    std::optional<int> year;
    if (auto y = parse_optional_integer(row[c_year], where)) year = static_cast<int>(*y);
    const auto k = rail.pair_index(*i, *j);
    if (seen[k] && rail.years_[k] != year)
      throw InputError(where + ": asymmetric rail entry for pair (" + row[c_i] + ", " + row[c_j] + ")");
    seen[k] = true;
    rail.years_[k] = year;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!seen[rail.pair_index(i, j)])
        throw InputError(table.source() + ": missing pair (" + provinces[i].abbreviation + ", " +
                         provinces[j].abbreviation + ")");
  return rail;
}

RailTable RailTable::read(const std::filesystem::path& path, const ProvinceRegistry& provinces) {
  return from_table(DelimitedTable::read(path), provinces);
}

DelimitedTable RailTable::to_table(const ProvinceRegistry& provinces) const {
  DelimitedTable t({"i", "j", "connected_year"});
  for (std::size_t i = 0; i < provinces_; ++i)
    for (std::size_t j = i + 1; j < provinces_; ++j) {
      const auto y = years_[pair_index(i, j)];
      t.add_row({provinces[i].abbreviation, provinces[j].abbreviation, y ? std::to_string(*y) : std::string()});
    }
  return t;
}

}  // namespace colearn
