#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "colearn/panel.hpp"

namespace colearn {

struct ScenarioConfig {
  std::uint64_t seed = 20170601;
  std::size_t provinces = 50;
  std::size_t industries = 96;
  std::size_t sectors = 6;
  int first_year = 1985;
  int last_year = 2015;

  // Activation probability of an inactive cell:
  // Phi(b0 + b_neighbors*Omega + b_related*omega + b_interaction*Omega*omega).
  double b0 = -6.0;
  double b_neighbors = 6.0;
  double b_related = 5.0;
  double b_interaction = -2.5;

  // Cells start present with probability Phi(q0 + e[province][sector]), q0 =
  // Phi^-1(initial_presence), e ~ N(0, sector_spread). Firm counts scale with
  // province size x industry size x level x noise, then present cells are
  // lifted to an RCA of at least present_rca and absent cells capped at absent_rca.
  double initial_presence = 0.35;
  double sector_spread = 2.0;
  // Present cells exit with probability exit_rate * (s / initial_presence)^exit_elasticity,
  // s = current share of present cells, times exp(-exit_affinity * e), capped at 0.5.
  double exit_rate = 0.05;
  double exit_elasticity = 4.0;
  double exit_affinity = 0.3;
  double present_level = 2.0;
  double absent_level = 0.02;
  double present_rca = 1.5;
  double absent_rca = 0.5;
  double level_noise = 0.2;  // log-scale sd, redrawn on each switch
  double size_noise = 0.3;   // log-scale sd of province and industry sizes
  double firms_per_cell = 4.0;   // mean firms per cell in the first year
  double firm_growth = 0.04;     // linear growth of the firm total per year

  // Productivity (revenue per employee). A province's productivity is
  // multiplied by exp(treatment_effect) from the year it first gets rail.
  double productivity_growth = 0.06;
  double productivity_noise = 0.15;
  double treatment_effect = 0.3;

  double rail_share = 0.35;  // fraction of pairs that ever get rail
  int rail_first_year = 2006;
  int rail_last_year = 2015;

  double map_size_km = 3000.0;
  double adjacency_km = 700.0;

  /// Throws InputError when the configuration cannot be generated.
  void validate() const;
  nlohmann::json to_json() const;
};

struct Scenario {
  ProvinceRegistry provinces;
  IndustryRegistry industries;
  DelimitedTable firms;
  DistanceTable distances;
  MacroTable macro;
  RailTable rail;
  nlohmann::json truth;
};

Scenario generate(const ScenarioConfig& config);

/// File name -> contents: provinces.csv, industries.csv, firms.csv,
/// distances.csv, macro.csv, rail.csv, truth.json.
std::map<std::string, std::string> render_scenario(const Scenario& scenario);
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace colearn
