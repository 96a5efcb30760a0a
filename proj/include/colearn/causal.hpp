#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colearn/panel.hpp"
#include "colearn/regression.hpp"

namespace colearn {

/// Outcome of a province pair (i < j) in one year.
struct PairYearValue {
  std::size_t i = 0;
  std::size_t j = 0;
  int year = 0;
  double outcome = 0.0;
};

struct EventStudyOptions {
  int baseline_year = 2005;
  /// Pairs connected by this year form the treated group.
  int treatment_year = 2015;
  /// Treat main effect and year dummies alongside the interactions. When
  /// false the design is intercept + Treat x 1{t = k} only.
  bool two_way = true;
  Covariance covariance = Covariance::Robust;
  double band_z = 1.959963984540054;
};

struct EventStudyPoint {
  int year = 0;
  double beta = 0.0;
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double p_value = 1.0;
};

/// Linear fit of beta_k on k over a range of years.
struct TrendFit {
  int first_year = 0;
  int last_year = 0;
  std::size_t points = 0;
  double slope = 0.0;
  double std_error = 0.0;  // NaN with fewer than three points
  double p_value = 1.0;
};

struct EventStudyResult {
  std::vector<EventStudyPoint> points;  // every year, baseline pinned at 0
  TrendFit pre_trend;                   // years <= baseline
  TrendFit post_trend;                  // years >= baseline
  RegressionResult regression;
  std::size_t treated_pairs = 0;
  std::size_t control_pairs = 0;
};

EventStudyResult event_study(std::span<const PairYearValue> panel, const RailTable& rail,
                             const EventStudyOptions& options = {});

/// Absolute gaps between the two provinces of a pair in one year.
struct MacroGaps {
  double log_population = 0.0;
  double log_gdp_per_capita = 0.0;
  double urbanization = 0.0;
  double log_trade = 0.0;
};

MacroGaps macro_gaps(const MacroTable& macro, std::size_t i, std::size_t j, int year);

enum class DidControl { Population, GdpPerCapita, Urbanization, Trade, LogDistance };
const char* to_string(DidControl control);

struct DidPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double before = 0.0;
  double after = 0.0;
};

struct DidOptions {
  int before_year = 2004;
  int after_year = 2014;
  int treatment_year = 2015;
  std::vector<DidControl> controls;
};

struct GroupMeans {
  double control_before = 0.0;
  double control_after = 0.0;
  double treated_before = 0.0;
  double treated_after = 0.0;
  std::size_t control_pairs = 0;
  std::size_t treated_pairs = 0;

  double difference_in_differences() const {
    return (treated_after - treated_before) - (control_after - control_before);
  }
};

struct DidResult {
  RegressionResult classical;
  RegressionResult robust;
  GroupMeans means;
};

/// Two rows per pair; columns intercept, treat, after, treat_x_after, then
/// the requested controls. Macro gaps are taken in each row's own year.
/// `macro` and `distances` are needed only when the matching controls are asked for.
DidResult did_estimate(std::span<const DidPair> pairs, const RailTable& rail, const DidOptions& options,
                       const MacroTable* macro = nullptr, const DistanceTable* distances = nullptr);

}  // namespace colearn
