#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "colearn/causal.hpp"
#include "colearn/regression.hpp"

namespace colearn {

struct ReportColumn {
  std::string title;
  const RegressionResult* result = nullptr;
};

struct ReportRow {
  std::string coefficient;  // name in the design
  std::string label;        // printed label
};

/// Coefficient with stars, SE in parentheses underneath, then n and fit
/// statistics. Rows absent from a column are left blank.
std::string regression_table(const std::string& caption, const std::vector<ReportColumn>& columns,
                             const std::vector<ReportRow>& rows, bool year_effects);

/// Estimates as text: 4 decimals below 1000 in magnitude, whole numbers above.
std::string format_estimate(double v);

nlohmann::json to_json(const RegressionResult& result);
nlohmann::json to_json(const GroupMeans& means);
nlohmann::json to_json(const EventStudyResult& result);

}  // namespace colearn
