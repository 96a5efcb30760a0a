#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "colearn/pipeline.hpp"

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  colearn::PipelineConfig config;
  config.input_dir = env_or("COLEARN_INPUT_DIR", ".");
  config.out_dir = env_or("COLEARN_OUT_DIR", "out");

  CLI::App app{"Collective-learning analysis pipeline"};
  std::string command;
  std::string input_dir = config.input_dir.string(), out_dir = config.out_dir.string();
  std::string proximity = "fixed", density = "geo", did_years;
  int year = 0;

  std::string commands;
  for (const auto& c : colearn::pipeline_commands()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("--input-dir", input_dir, "Directory with input tables (env COLEARN_INPUT_DIR)");
  app.add_option("--out-dir", out_dir, "Output directory (env COLEARN_OUT_DIR)");
  auto* year_opt = app.add_option("--year", year, "Year for single-year outputs (default: last panel year)");
  app.add_option("--horizon", config.horizon, "Event horizon in years")->capture_default_str();
  app.add_option("--proximity", proximity, "fixed:<year> or varying")->capture_default_str();
  app.add_option("--density", density, "Neighbor density: geo, hops, ratio or count")->capture_default_str();
  app.add_option("--bins", config.bins, "Bins per curve axis")->capture_default_str();
  app.add_option("--did-years", did_years, "DID periods as Y1,Y2 (default 2004,2014)");
  app.add_option("--seed", config.seed, "Seed for synth")->capture_default_str();
  app.add_option("--treatment-year", config.treatment_year, "Rail connections up to this year define treatment")
      ->capture_default_str();
  app.add_option("--baseline-year", config.baseline_year, "Event-study baseline year")->capture_default_str();

  try {
    app.parse(argc, argv);
    config.input_dir = input_dir;
    config.out_dir = out_dir;
    if (*year_opt) config.year = year;
    config.proximity = colearn::ProximitySpec::parse(proximity);
    config.density = colearn::parse_weighting(density);
    if (!did_years.empty()) {
      const auto comma = did_years.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("--did-years expects Y1,Y2");
      config.did_before = std::stoi(did_years.substr(0, comma));
      config.did_after = std::stoi(did_years.substr(comma + 1));
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: kind=usage stage=setup message=\"" << e.what() << "\"\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: kind=usage stage=setup message=\"" << e.what() << "\"\n";
    return 1;
  }

  try {
    const auto outputs = colearn::run_pipeline(command, config);
    std::cout << command << ": wrote " << outputs.size() << " files to " << config.out_dir.string() << '\n';
    return 0;
  } catch (const colearn::StageFailure& e) {
    std::cerr << e.line() << '\n';
    return e.exit_code();
  }
}
