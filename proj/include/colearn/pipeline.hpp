#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "colearn/geo.hpp"

namespace colearn {

/// "fixed:<year>" or "varying". Fixed without a year means the last panel year.
struct ProximitySpec {
  bool varying = false;
  std::optional<int> year;

  static ProximitySpec parse(const std::string& text);
  std::string to_string() const;
};

struct PipelineConfig {
  std::filesystem::path input_dir = ".";
  std::filesystem::path out_dir = "out";
  std::optional<int> year;  // single-year outputs; last panel year by default
  int horizon = 5;
  ProximitySpec proximity;
  NeighborWeighting density = NeighborWeighting::GeoDistance;
  std::size_t bins = 10;
  int did_before = 2004;
  int did_after = 2014;
  std::uint64_t seed = 20170601;
  int treatment_year = 2015;
  int baseline_year = 2005;
  int event_study_first = 1997;
  double space_cutoff = 0.81;

  nlohmann::json to_json() const;
};

const std::vector<std::string>& pipeline_commands();

/// A stage failed; `kind` is "input", "numerical" or "internal".
class StageFailure : public std::runtime_error {
 public:
  StageFailure(std::string kind, std::string stage, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)), stage_(std::move(stage)) {}
  const std::string& kind() const { return kind_; }
  const std::string& stage() const { return stage_; }
  /// error: kind=<kind> stage=<stage> message="<message>"
  std::string line() const;
  int exit_code() const;

 private:
  std::string kind_;
  std::string stage_;
};

/// Runs one subcommand. Outputs are held in memory and written to out_dir
/// only after every stage succeeded. Returns output name -> content.
std::map<std::string, std::string> run_pipeline(const std::string& command, const PipelineConfig& config);

std::string sha256_hex(const std::string& data);

}  // namespace colearn
