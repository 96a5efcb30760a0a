#include "colearn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <optional>

#include "colearn/error.hpp"
#include "colearn/geo.hpp"
#include "colearn/metrics.hpp"
#include "colearn/rng.hpp"
#include "colearn/special.hpp"

namespace colearn {
namespace {

struct Firm {
  std::size_t province;
  std::size_t industry;
  int list_year;
  std::optional<int> delist_year;
  int employees;
  double multiplier;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

std::string two_digit(std::size_t v) {
  std::string out = std::to_string(v);
  return out.size() < 2 ? "0" + out : out;
}

// Euclidean MST over planar points plus every pair closer than `radius`;
// hop counts by breadth-first search.
std::vector<std::vector<int>> hop_matrix(const std::vector<double>& x, const std::vector<double>& y, double radius) {
  const auto n = x.size();
  auto dist = [&](std::size_t i, std::size_t j) { return std::hypot(x[i] - x[j], y[i] - y[j]); };
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  // Prim
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, INFINITY);
  std::vector<std::size_t> parent(n, 0);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
    in_tree[u] = true;
    if (step > 0) adj[u][parent[u]] = adj[parent[u]][u] = true;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && dist(u, v) < best[v]) {
        best[v] = dist(u, v);
        parent[v] = u;
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist(i, j) < radius) adj[i][j] = adj[j][i] = true;

  std::vector<std::vector<int>> hops(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    hops[s][s] = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v)
        if (adj[u][v] && hops[s][v] < 0) {
          hops[s][v] = hops[s][u] + 1;
          queue.push_back(v);
        }
    }
  }
  return hops;
}

}  // namespace

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& why) { throw InputError("infeasible scenario: " + why); };
  if (provinces < 2) fail("need at least 2 provinces");
  if (industries < 2) fail("need at least 2 industries");
  if (sectors < 1 || sectors > 26 || sectors > industries) fail("sectors must be in [1, min(26, industries)]");
  if (industries > 99) fail("at most 99 industries");
  if (last_year <= first_year) fail("need at least two years");
  if (rail_first_year > rail_last_year) fail("rail rollout window is empty");
  if (!(rail_share >= 0 && rail_share <= 1)) fail("rail_share must be in [0, 1]");
  if (!(exit_rate >= 0 && exit_rate <= 1)) fail("exit_rate must be in [0, 1]");
  if (!(firms_per_cell > 0)) fail("firms_per_cell must be positive");
  if (!(firm_growth >= 0)) fail("firm_growth must be non-negative");
  if (!(initial_presence >= 0 && initial_presence <= 1)) fail("initial_presence must be in [0, 1]");
  if (!(absent_level >= 0) || !(present_level > absent_level)) fail("need 0 <= absent_level < present_level");
  if (!(level_noise >= 0) || !(size_noise >= 0) || !(sector_spread >= 0)) fail("noise scales must be non-negative");
  if (!(present_rca > 1) || !(absent_rca > 0) || !(absent_rca < 1)) fail("need absent_rca < 1 < present_rca");
  if (!(map_size_km > 0) || !(adjacency_km >= 0)) fail("map size must be positive");
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"seed", seed},
          {"provinces", provinces},
          {"industries", industries},
          {"sectors", sectors},
          {"first_year", first_year},
          {"last_year", last_year},
          {"link",
           {{"intercept", b0},
            {"neighbors", b_neighbors},
            {"related", b_related},
            {"interaction", b_interaction}}},
          {"exit_rate", exit_rate},
          {"exit_elasticity", exit_elasticity},
          {"exit_affinity", exit_affinity},
          {"initial_presence", initial_presence},
          {"sector_spread", sector_spread},
          {"present_rca", present_rca},
          {"absent_rca", absent_rca},
          {"present_level", present_level},
          {"absent_level", absent_level},
          {"level_noise", level_noise},
          {"size_noise", size_noise},
          {"firms_per_cell", firms_per_cell},
          {"firm_growth", firm_growth},
          {"productivity_growth", productivity_growth},
          {"productivity_noise", productivity_noise},
          {"treatment_effect", treatment_effect},
          {"rail_share", rail_share},
          {"rail_first_year", rail_first_year},
          {"rail_last_year", rail_last_year},
          {"map_size_km", map_size_km},
          {"adjacency_km", adjacency_km}};
}

Scenario generate(const ScenarioConfig& config) {
  config.validate();
  Random rng(config.seed);
  const auto P = config.provinces;
  const auto I = config.industries;
  const YearRange years{config.first_year, config.last_year};

  Scenario s;

  std::vector<Province> provinces;
  for (std::size_t i = 0; i < P; ++i)
    provinces.push_back({static_cast<int>(i + 1), "P" + two_digit(i + 1), "Province " + two_digit(i + 1)});
  s.provinces = ProvinceRegistry(provinces);

  std::vector<Industry> industries;
  for (std::size_t a = 0; a < I; ++a) {
    const char sector = static_cast<char>('A' + a * config.sectors / I);
    industries.push_back({{sector, static_cast<int>(a + 1)}, "Industry " + two_digit(a + 1)});
  }
  s.industries = IndustryRegistry(industries);

  // Geography
  std::vector<double> px(P), py(P);
  for (std::size_t i = 0; i < P; ++i) {
    px[i] = rng.uniform(0.0, config.map_size_km);
    py[i] = rng.uniform(0.0, config.map_size_km);
  }
  const auto hops = hop_matrix(px, py, config.adjacency_km);
  s.distances = DistanceTable(P);
  using M = DistanceTable::Metric;
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = i + 1; j < P; ++j) {
      const double d = std::max(1.0, round_to(std::hypot(px[i] - px[j], py[i] - py[j]), 0.1));
      const double v = round_to(d * rng.uniform(1.15, 1.4), 0.1);
      s.distances.set(M::Geographic, i, j, d);
      s.distances.set(M::Driving, i, j, v);
      s.distances.set(M::Hops, i, j, hops[i][j]);
      s.distances.set(M::TransitTime, i, j, round_to(v / 45.0 + 1.0, 0.01));
      s.distances.set(M::TrainTime, i, j, round_to(d / 160.0 + 0.5, 0.01));
      s.distances.set(M::DriveTime, i, j, round_to(v / 75.0, 0.01));
    }

  // Rail
  s.rail = RailTable(P);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = i + 1; j < P; ++j) {
      const bool built = rng.bernoulli(config.rail_share);
      const int year = static_cast<int>(rng.uniform_int(config.rail_first_year, config.rail_last_year));
      s.rail.set(i, j, built ? std::optional<int>(year) : std::nullopt);
    }

  // Macro indicators
  s.macro = MacroTable(P, years);
  for (std::size_t i = 0; i < P; ++i) {
    double population = 3000.0 * std::exp(0.7 * rng.normal());
    double gdp = 1500.0 * std::exp(0.4 * rng.normal());
    const double land = 150000.0 * std::exp(0.6 * rng.normal());
    double urban_share = rng.uniform(0.01, 0.05);
    double trade = 1.0e6 * std::exp(1.0 * rng.normal());
    const double pop_growth = rng.uniform(0.0, 0.015);
    const double gdp_growth = rng.uniform(0.07, 0.12);
    const double trade_growth = rng.uniform(0.08, 0.16);
    for (int t = years.first; t <= years.last; ++t) {
      MacroRecord r;
      r.population = round_to(population, 0.01);
      r.gdp_per_capita = round_to(gdp, 0.01);
      r.land_area = round_to(land, 0.01);
      r.urban_area = round_to(std::min(0.9, urban_share) * land, 0.01);
      r.trade = round_to(trade, 0.01);
      s.macro.set(i, t, r);
      population *= std::exp(pop_growth + 0.005 * rng.normal());
      gdp *= std::exp(gdp_growth + 0.02 * rng.normal());
      urban_share *= std::exp(0.04 + 0.01 * rng.normal());
      trade *= std::exp(trade_growth + 0.05 * rng.normal());
    }
  }

  // Latent sizes and productivity levels
  std::vector<double> province_size(P), industry_size(I), province_prod(P), industry_prod(I);
  for (auto& v : province_size) v = std::exp(config.size_noise * rng.normal());
  for (auto& v : industry_size) v = std::exp(config.size_noise * rng.normal());
  for (auto& v : province_prod) v = 0.2 * rng.normal();
  for (auto& v : industry_prod) v = 200000.0 * std::exp(0.3 * rng.normal());

  std::vector<Firm> firms;
  std::vector<std::vector<std::size_t>> alive(P * I);
  auto list_firm = [&](std::size_t i, std::size_t a, int year) {
    firms.push_back({i, a, year, std::nullopt, static_cast<int>(rng.uniform_int(20, 500)),
                     std::exp(config.productivity_noise * rng.normal())});
    alive[i * I + a].push_back(firms.size() - 1);
  };
  auto delist_firm = [&](std::size_t i, std::size_t a, int year) {
    auto& cell = alive[i * I + a];
    const auto k = rng.uniform_int(static_cast<std::uint64_t>(cell.size()));
    firms[cell[k]].delist_year = year;
    cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(k));
  };

  // Firm counts follow the cell weights, scaled to a firm total that grows linearly.
  Matrix weight(P, I);
  std::vector<char> present(P * I, 0);
  auto set_level = [&](std::size_t i, std::size_t a, bool on) {
    present[i * I + a] = on;
    const double level = on ? config.present_level : config.absent_level;
    weight(i, a) = province_size[i] * industry_size[a] * level * std::exp(config.level_noise * rng.normal());
  };
  const double q0 = normal_quantile(std::clamp(config.initial_presence, 1e-6, 1.0 - 1e-6));
  // Province-sector affinity: raises initial presence and lowers exit.
  Matrix affinity(P, I);
  for (std::size_t i = 0; i < P; ++i) {
    std::vector<double> sector_effect(config.sectors);
    for (auto& e : sector_effect) e = config.sector_spread * rng.normal();
    for (std::size_t a = 0; a < I; ++a) {
      affinity(i, a) = sector_effect[static_cast<std::size_t>(industries[a].code.sector - 'A')];
      set_level(i, a, rng.bernoulli(normal_cdf(q0 + affinity(i, a))));
    }
  }

  // Firm counts follow the cell weights pushed apart around their expected
  // values, which keeps the observed RCA activity close to the latent state.
  auto effective_weights = [&]() {
    const Eigen::VectorXd row_w = weight.rowwise().sum();
    const Eigen::RowVectorXd col_w = weight.colwise().sum();
    const double total = weight.sum();
    Matrix w = weight;
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a) {
        const double expected = row_w(i) * col_w(a) / total;
        w(i, a) = present[i * I + a] ? std::max(w(i, a), config.present_rca * expected)
                                     : std::min(w(i, a), config.absent_rca * expected);
      }
    return w;
  };

  // Cell productivity per year, filled during the simulation.
  std::vector<Matrix> productivity;
  std::vector<int> first_rail(P, years.last + 1);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < P; ++j)
      if (auto y = s.rail.connection_year(i, j); y && i != j) first_rail[i] = std::min(first_rail[i], *y);

  // Activation draws tallied by decile of the link argument's Omega.
  std::vector<std::size_t> trials(10, 0), activations(10, 0);
  const auto cell_density = [](const Matrix& m, std::size_t i, std::size_t a) {
    return std::isnan(m(i, a)) ? 0.0 : m(i, a);
  };

  for (int t = years.first; t <= years.last; ++t) {
    const double firm_total =
        config.firms_per_cell * static_cast<double>(P * I) * (1.0 + config.firm_growth * (t - years.first));
    const Matrix cell_weight = effective_weights();
    const double weight_total = cell_weight.sum();
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a) {
        const double share = firm_total * cell_weight(i, a) / weight_total;
        const auto target = static_cast<long long>(present[i * I + a] ? std::ceil(share) : std::floor(share));
        const auto current = static_cast<long long>(alive[i * I + a].size());
        for (long long k = current; k < target; ++k) list_firm(i, a, t);
        for (long long k = target; k < current; ++k) delist_firm(i, a, t);
      }

    Matrix counts(P, I);
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a) counts(i, a) = static_cast<double>(alive[i * I + a].size());
    if (!(counts.sum() > 0)) throw NumericalError("synthetic panel has no firms");
    const auto u = compute_activity(compute_rca(counts));

    Matrix prod(P, I);
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a)
        prod(i, a) = industry_prod[a] * std::exp(province_prod[i] + config.productivity_growth * (t - years.first)) *
                     (t >= first_rail[i] ? std::exp(config.treatment_effect) : 1.0);
    productivity.push_back(prod);
    if (t == years.last) break;

    const auto phi = compute_proximity(counts);
    const Matrix omega = density_related_matrix(u, phi);
    std::vector<int> row_present(P, 0), col_present(I, 0);
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a)
        if (present[i * I + a]) {
          ++row_present[i];
          ++col_present[a];
        }
    const double present_share =
        static_cast<double>(std::count(present.begin(), present.end(), 1)) / static_cast<double>(P * I);
    const double exit_probability =
        std::min(0.5, config.exit_rate * std::pow(present_share / config.initial_presence, config.exit_elasticity));
    const Matrix big_omega = density_neighbors_matrix(u, s.distances, NeighborWeighting::GeoDistance);
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a) {
        if (!present[i * I + a]) {
          const double w = cell_density(omega, i, a);
          const double W = cell_density(big_omega, i, a);
          const double link = config.b0 + config.b_neighbors * W + config.b_related * w +
                              config.b_interaction * W * w;
          const auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(W * 10.0));
          ++trials[bin];
          if (rng.bernoulli(normal_cdf(link))) {
            ++activations[bin];
            set_level(i, a, true);
          }
        } else if (rng.bernoulli(std::min(0.5, exit_probability * std::exp(-config.exit_affinity * affinity(i, a))))) {
          // The last present cell of a province or an industry stays.
          if (row_present[i] > 1 && col_present[a] > 1) {
            set_level(i, a, false);
            --row_present[i];
            --col_present[a];
          }
        }
      }
  }

  s.firms = DelimitedTable({"firm_id", "province", "sector", "subsector", "list_year", "delist_year", "year",
                            "revenue", "employees"});
  for (std::size_t f = 0; f < firms.size(); ++f) {
    const auto& firm = firms[f];
    char id[32];
    std::snprintf(id, sizeof id, "F%06zu", f + 1);
    const auto& code = s.industries[firm.industry].code;
    const int end = firm.delist_year ? *firm.delist_year - 1 : years.last;
    for (int t = firm.list_year; t <= end; ++t) {
      const double revenue =
          std::round(productivity[years.index(t)](firm.province, firm.industry) * firm.multiplier * firm.employees);
      s.firms.add_row({id, s.provinces[firm.province].abbreviation, std::string(1, code.sector),
                       two_digit(static_cast<std::size_t>(code.subsector)), std::to_string(firm.list_year),
                       firm.delist_year ? std::to_string(*firm.delist_year) : "", std::to_string(t),
                       format_exact(revenue), std::to_string(firm.employees)});
    }
  }

  std::size_t total_trials = 0, total_activations = 0;
  for (std::size_t b = 0; b < trials.size(); ++b) {
    total_trials += trials[b];
    total_activations += activations[b];
  }
  s.truth = {{"scenario", config.to_json()},
             {"firms", firms.size()},
             {"activation",
              {{"trials", total_trials},
               {"activations", total_activations},
               {"trials_by_neighbor_decile", trials},
               {"activations_by_neighbor_decile", activations}}}};
  return s;
}

std::map<std::string, std::string> render_scenario(const Scenario& s) {
  return {{"provinces.csv", s.provinces.to_table().to_string()},
          {"industries.csv", s.industries.to_table().to_string()},
          {"firms.csv", s.firms.to_string()},
          {"distances.csv", s.distances.to_table(s.provinces).to_string()},
          {"macro.csv", s.macro.to_table(s.provinces).to_string()},
          {"rail.csv", s.rail.to_table(s.provinces).to_string()},
          {"truth.json", s.truth.dump(2) + "\n"}};
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : render_scenario(scenario)) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    out << content;
  }
}

}  // namespace colearn
