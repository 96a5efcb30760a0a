#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "colearn/metrics.hpp"

namespace colearn {

/// Activity matrices for a contiguous run of years.
class ActivityPanel {
 public:
  ActivityPanel() = default;
  ActivityPanel(YearRange years, std::vector<ActivityMatrix> matrices);

  /// RCA >= threshold for every year of the panel.
  static ActivityPanel from_panel(const PanelTensor& panel, double threshold = 1.0);

  const YearRange& years() const { return years_; }
  const ActivityMatrix& at(int year) const { return matrices_[years_.index(year)]; }
  std::size_t provinces() const { return matrices_.empty() ? 0 : matrices_.front().provinces(); }
  std::size_t industries() const { return matrices_.empty() ? 0 : matrices_.front().industries(); }

 private:
  YearRange years_;
  std::vector<ActivityMatrix> matrices_;
};

enum class EventKind { EntryCandidate, Entry, KeepCandidate, Keep };
const char* to_string(EventKind kind);

/// One (province, industry, base year) observation. Entry candidates are
/// inactive at t-2, t-1 and t; they realize an entry when active at t+h,
/// t+h+1 and t+h+2. Keep candidates are active at t and realize a keep when
/// active at t+h (or all of t+h..t+h+2 in strict mode).
struct EventRecord {
  std::size_t province = 0;
  std::size_t industry = 0;
  int base_year = 0;
  int horizon = 5;
  bool entry_candidate = true;
  bool realized = false;

  EventKind kind() const;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct EventOptions {
  int horizon = 5;
  bool strict_keep = false;
  /// Base years to scan; defaults to every panel year.
  std::optional<int> first_base_year;
  std::optional<int> last_base_year;
};

struct EventSet {
  /// Ordered by (base year, province, industry).
  std::vector<EventRecord> records;
  /// (cell, base year) combinations whose window [t-2, t+h+2] leaves the panel.
  std::size_t skipped_cells = 0;
};

EventSet detect_events(const ActivityPanel& activity, const EventOptions& options = {});

struct CurveBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0;  // NaN for empty bins
  double std_error = 0.0;
  std::size_t count = 0;
  bool sparse = false;  // fewer than 5 observations
};

/// Equal-width bins over [min, max] of `x`; per-bin mean of `y` and standard
/// error sqrt(var / n) with the population variance (sqrt(p(1-p)/n) for 0/1).
struct BinnedCurve {
  std::vector<CurveBin> bins;
};

BinnedCurve binned_curve(std::span<const double> x, std::span<const double> y, std::size_t n_bins = 10);

/// Two-dimensional analogue: rows bin `y_axis`, columns bin `x_axis`.
struct JointGrid {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  Matrix probability;  // NaN for empty cells
  Eigen::MatrixXi counts;
};

JointGrid joint_grid(std::span<const double> x_axis, std::span<const double> y_axis,
                     std::span<const double> outcomes, std::size_t x_bins = 10, std::size_t y_bins = 10);

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 1.0;
  double df_within = 0.0;
};

/// One-way ANOVA between two groups.
AnovaResult anova_two_group(std::span<const double> a, std::span<const double> b);

double pearson_r(std::span<const double> x, std::span<const double> y);

}  // namespace colearn
