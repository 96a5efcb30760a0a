#include "colearn/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "colearn/error.hpp"
#include "colearn/special.hpp"

namespace colearn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t bin_of(double v, double lo, double width, std::size_t n_bins) {
  if (!(width > 0)) return 0;
  const auto k = static_cast<std::size_t>(std::floor((v - lo) / width));
  return std::min(k, n_bins - 1);
}

std::pair<double, double> range_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace

ActivityPanel::ActivityPanel(YearRange years, std::vector<ActivityMatrix> matrices)
    : years_(years), matrices_(std::move(matrices)) {
  if (matrices_.size() != years_.size()) throw std::invalid_argument("ActivityPanel: one matrix per year required");
}

ActivityPanel ActivityPanel::from_panel(const PanelTensor& panel, double threshold) {
  std::vector<ActivityMatrix> matrices;
  for (int t = panel.years().first; t <= panel.years().last; ++t) {
    if (panel.total(t) == 0) {
      matrices.push_back(ActivityMatrix::from_indicators(Matrix::Zero(panel.provinces(), panel.industries())));
      continue;
    }
    matrices.push_back(compute_activity(compute_rca(panel, t), threshold));
  }
  return ActivityPanel(panel.years(), std::move(matrices));
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::EntryCandidate: return "entry-candidate";
    case EventKind::Entry: return "entry";
    case EventKind::KeepCandidate: return "keep-candidate";
    case EventKind::Keep: return "keep";
  }
  return "?";
}

EventKind EventRecord::kind() const {
  if (entry_candidate) return realized ? EventKind::Entry : EventKind::EntryCandidate;
  return realized ? EventKind::Keep : EventKind::KeepCandidate;
}

EventSet detect_events(const ActivityPanel& activity, const EventOptions& options) {
  if (options.horizon < 1) throw std::invalid_argument("detect_events: horizon must be positive");
  const auto& years = activity.years();
  const int h = options.horizon;
  const int first = options.first_base_year.value_or(years.first);
  const int last = options.last_base_year.value_or(years.last);
  const auto provinces = activity.provinces();
  const auto industries = activity.industries();
  const auto cells = provinces * industries;

  EventSet out;
  for (int t = first; t <= last; ++t) {
    if (!years.contains(t - 2) || !years.contains(t + h + 2)) {
      out.skipped_cells += cells;
      continue;
    }
    const auto& before2 = activity.at(t - 2).values();
    const auto& before1 = activity.at(t - 1).values();
    const auto& base = activity.at(t).values();
    const auto& after0 = activity.at(t + h).values();
    const auto& after1 = activity.at(t + h + 1).values();
    const auto& after2 = activity.at(t + h + 2).values();

    // 0 = not a candidate, 1 = candidate, 2 = realized; one slot per cell.
    std::vector<signed char> status(cells, 0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(cells); ++k) {
      const auto i = static_cast<Eigen::Index>(k / industries);
      const auto a = static_cast<Eigen::Index>(k % industries);
      const bool sustained = after0(i, a) == 1 && after1(i, a) == 1 && after2(i, a) == 1;
      if (base(i, a) == 0) {
        if (before1(i, a) == 0 && before2(i, a) == 0) status[k] = sustained ? 2 : 1;
      } else {
        const bool kept = options.strict_keep ? sustained : after0(i, a) == 1;
        status[k] = kept ? 2 : 1;
      }
    }
    for (std::size_t k = 0; k < cells; ++k) {
      if (status[k] == 0) continue;
      const auto i = k / industries;
      const auto a = k % industries;
      out.records.push_back({i, a, t, h, base(i, a) == 0, status[k] == 2});
    }
  }
  return out;
}

BinnedCurve binned_curve(std::span<const double> x, std::span<const double> y, std::size_t n_bins) {
  if (x.empty()) throw std::invalid_argument("binned_curve: no observations");
  if (x.size() != y.size()) throw std::invalid_argument("binned_curve: length mismatch");
  if (n_bins == 0) throw std::invalid_argument("binned_curve: need at least one bin");
  const auto [lo, hi] = range_of(x);
  const double width = (hi - lo) / static_cast<double>(n_bins);

  std::vector<double> sum(n_bins, 0.0), sum_sq(n_bins, 0.0);
  BinnedCurve curve;
  curve.bins.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    curve.bins[b].lower = lo + width * static_cast<double>(b);
    curve.bins[b].upper = b + 1 == n_bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto b = bin_of(x[k], lo, width, n_bins);
    sum[b] += y[k];
    sum_sq[b] += y[k] * y[k];
    ++curve.bins[b].count;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    auto& bin = curve.bins[b];
    bin.sparse = bin.count < 5;
    if (bin.count == 0) {
      bin.mean = kNaN;
      bin.std_error = kNaN;
      continue;
    }
    const double n = static_cast<double>(bin.count);
    bin.mean = sum[b] / n;
    const double variance = std::max(0.0, sum_sq[b] / n - bin.mean * bin.mean);
    bin.std_error = std::sqrt(variance / n);
  }
  return curve;
}

JointGrid joint_grid(std::span<const double> x_axis, std::span<const double> y_axis,
                     std::span<const double> outcomes, std::size_t x_bins, std::size_t y_bins) {
  if (x_axis.empty()) throw std::invalid_argument("joint_grid: no observations");
  if (x_axis.size() != y_axis.size() || x_axis.size() != outcomes.size())
    throw std::invalid_argument("joint_grid: length mismatch");
  if (x_bins == 0 || y_bins == 0) throw std::invalid_argument("joint_grid: need at least one bin per axis");
  const auto [x_lo, x_hi] = range_of(x_axis);
  const auto [y_lo, y_hi] = range_of(y_axis);
  const double x_width = (x_hi - x_lo) / static_cast<double>(x_bins);
  const double y_width = (y_hi - y_lo) / static_cast<double>(y_bins);

  JointGrid grid;
  for (std::size_t b = 0; b <= x_bins; ++b)
    grid.x_edges.push_back(b == x_bins ? x_hi : x_lo + x_width * static_cast<double>(b));
  for (std::size_t b = 0; b <= y_bins; ++b)
    grid.y_edges.push_back(b == y_bins ? y_hi : y_lo + y_width * static_cast<double>(b));
  Matrix sums = Matrix::Zero(y_bins, x_bins);
  grid.counts = Eigen::MatrixXi::Zero(y_bins, x_bins);
  for (std::size_t k = 0; k < x_axis.size(); ++k) {
    const auto c = bin_of(x_axis[k], x_lo, x_width, x_bins);
    const auto r = bin_of(y_axis[k], y_lo, y_width, y_bins);
    sums(r, c) += outcomes[k];
    ++grid.counts(r, c);
  }
  grid.probability = Matrix(y_bins, x_bins);
  for (std::size_t r = 0; r < y_bins; ++r)
    for (std::size_t c = 0; c < x_bins; ++c)
      grid.probability(r, c) = grid.counts(r, c) > 0 ? sums(r, c) / grid.counts(r, c) : kNaN;
  return grid;
}

AnovaResult anova_two_group(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("anova_two_group: each group needs two observations");
  auto mean = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double mean_a = mean(a), mean_b = mean(b);
  const double n_a = static_cast<double>(a.size()), n_b = static_cast<double>(b.size());
  const double grand = (mean_a * n_a + mean_b * n_b) / (n_a + n_b);
  double within = 0.0;
  for (double x : a) within += (x - mean_a) * (x - mean_a);
  for (double x : b) within += (x - mean_b) * (x - mean_b);
  const double between = n_a * (mean_a - grand) * (mean_a - grand) + n_b * (mean_b - grand) * (mean_b - grand);
  if (!(within > 0)) throw NumericalError("anova_two_group: zero pooled variance");

  AnovaResult out;
  out.df_within = n_a + n_b - 2.0;
  out.f = between / (within / out.df_within);
  out.p = f_survival(out.f, out.df_between, out.df_within);
  return out;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson_r: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (!(sxx > 0) || !(syy > 0)) throw NumericalError("pearson_r: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace colearn
