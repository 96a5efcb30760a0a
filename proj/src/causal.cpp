#include "colearn/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "colearn/error.hpp"
#include "colearn/special.hpp"

namespace colearn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string year_name(const char* prefix, int year) { return std::string(prefix) + std::to_string(year); }

TrendFit fit_trend(const std::vector<EventStudyPoint>& points, int first, int last) {
  TrendFit trend;
  trend.first_year = first;
  trend.last_year = last;
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (p.year < first || p.year > last) continue;
    xs.push_back(p.year);
    ys.push_back(p.beta);
  }
  trend.points = xs.size();
  if (xs.size() < 2) {
    trend.slope = kNaN;
    trend.std_error = kNaN;
    trend.p_value = kNaN;
    return trend;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  trend.slope = sxy / sxx;
  if (xs.size() < 3) {
    trend.std_error = kNaN;
    trend.p_value = kNaN;
    return trend;
  }
  double rss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = ys[k] - my - trend.slope * (xs[k] - mx);
    rss += e * e;
  }
  const double df = n - 2.0;
  trend.std_error = std::sqrt(rss / df / sxx);
  trend.p_value = trend.std_error > 0 ? t_two_sided_p(trend.slope / trend.std_error, df) : (trend.slope == 0 ? 1.0 : 0.0);
  return trend;
}

void count_groups(std::size_t treated, std::size_t control) {
  if (treated == 0) throw NumericalError("no treated pairs");
  if (control == 0) throw NumericalError("no control pairs");
}

}  // namespace

EventStudyResult event_study(std::span<const PairYearValue> panel, const RailTable& rail,
                             const EventStudyOptions& options) {
  if (panel.empty()) throw NumericalError("event study: empty panel");
  std::set<int> years;
  std::set<std::pair<std::size_t, std::size_t>> treated_set, control_set;
  for (const auto& obs : panel) {
    years.insert(obs.year);
    const auto key = std::minmax(obs.i, obs.j);
    if (rail.connected(obs.i, obs.j, options.treatment_year))
      treated_set.insert(key);
    else
      control_set.insert(key);
  }
  if (!years.count(options.baseline_year))
    throw std::invalid_argument("event study: baseline year " + std::to_string(options.baseline_year) +
                                " outside the panel");

  EventStudyResult out;
  out.treated_pairs = treated_set.size();
  out.control_pairs = control_set.size();
  count_groups(out.treated_pairs, out.control_pairs);

  const auto n = panel.size();
  Eigen::VectorXd y(n), treat(n);
  std::vector<int> obs_years(n);
  for (std::size_t r = 0; r < n; ++r) {
    y(r) = panel[r].outcome;
    treat(r) = rail.connected(panel[r].i, panel[r].j, options.treatment_year) ? 1.0 : 0.0;
    obs_years[r] = panel[r].year;
  }

  DesignMatrix design(n);
  design.add_intercept();
  if (options.two_way) {
    design.add_column("treat", treat);
    design.add_year_effects(obs_years, options.baseline_year);
  }
  for (int k : years) {
    if (k == options.baseline_year) continue;
    Eigen::VectorXd col(n);
    for (std::size_t r = 0; r < n; ++r) col(r) = obs_years[r] == k ? treat(r) : 0.0;
    design.add_column(year_name("treat_x_", k), col);
  }
  design.set_outcome(y);
  out.regression = ols_fit(design, options.covariance);

  for (int k : years) {
    EventStudyPoint p;
    p.year = k;
    if (k != options.baseline_year) {
      const auto& c = out.regression[year_name("treat_x_", k)];
      p.beta = c.estimate;
      p.std_error = c.std_error;
      p.p_value = c.p_value;
    }
    p.lower = p.beta - options.band_z * p.std_error;
    p.upper = p.beta + options.band_z * p.std_error;
    out.points.push_back(p);
  }
  out.pre_trend = fit_trend(out.points, *years.begin(), options.baseline_year);
  out.post_trend = fit_trend(out.points, options.baseline_year, *years.rbegin());
  return out;
}

MacroGaps macro_gaps(const MacroTable& macro, std::size_t i, std::size_t j, int year) {
  const auto& a = macro.at(i, year);
  const auto& b = macro.at(j, year);
  auto log_gap = [](double x, double y, const char* what) {
    if (!(x > 0) || !(y > 0)) throw InputError(std::string("non-positive ") + what + " in macro table");
    return std::abs(std::log(x) - std::log(y));
  };
  MacroGaps g;
  g.log_population = log_gap(a.population, b.population, "population");
  g.log_gdp_per_capita = log_gap(a.gdp_per_capita, b.gdp_per_capita, "gdp_pc");
  g.urbanization = std::abs(a.urbanization() - b.urbanization());
  g.log_trade = log_gap(a.trade, b.trade, "trade");
  return g;
}

const char* to_string(DidControl control) {
  switch (control) {
    case DidControl::Population: return "gap_log_population";
    case DidControl::GdpPerCapita: return "gap_log_gdp_pc";
    case DidControl::Urbanization: return "gap_urbanization";
    case DidControl::Trade: return "gap_log_trade";
    case DidControl::LogDistance: return "log_distance";
  }
  return "?";
}

DidResult did_estimate(std::span<const DidPair> pairs, const RailTable& rail, const DidOptions& options,
                       const MacroTable* macro, const DistanceTable* distances) {
  if (options.after_year <= options.before_year) throw std::invalid_argument("did: after year must follow before year");
  DidResult out;
  auto& m = out.means;
  for (const auto& p : pairs) {
    if (rail.connected(p.i, p.j, options.treatment_year)) {
      ++m.treated_pairs;
      m.treated_before += p.before;
      m.treated_after += p.after;
    } else {
      ++m.control_pairs;
      m.control_before += p.before;
      m.control_after += p.after;
    }
  }
  count_groups(m.treated_pairs, m.control_pairs);
  m.treated_before /= static_cast<double>(m.treated_pairs);
  m.treated_after /= static_cast<double>(m.treated_pairs);
  m.control_before /= static_cast<double>(m.control_pairs);
  m.control_after /= static_cast<double>(m.control_pairs);

  const auto n = 2 * pairs.size();
  Eigen::VectorXd y(n), treat(n), after(n), interaction(n);
  std::map<DidControl, Eigen::VectorXd> controls;
  for (auto c : options.controls) {
    if (c == DidControl::LogDistance ? distances == nullptr : macro == nullptr)
      throw std::invalid_argument(std::string("did: control ") + to_string(c) + " needs its source table");
    controls[c] = Eigen::VectorXd(n);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const double t = rail.connected(p.i, p.j, options.treatment_year) ? 1.0 : 0.0;
    for (int period = 0; period < 2; ++period) {
      const auto r = 2 * k + period;
      const int year = period == 0 ? options.before_year : options.after_year;
      y(r) = period == 0 ? p.before : p.after;
      treat(r) = t;
      after(r) = period;
      interaction(r) = t * period;
      if (controls.empty()) continue;
      MacroGaps gaps;
      if (macro) gaps = macro_gaps(*macro, p.i, p.j, year);
      for (auto& [c, col] : controls) {
        switch (c) {
          case DidControl::Population: col(r) = gaps.log_population; break;
          case DidControl::GdpPerCapita: col(r) = gaps.log_gdp_per_capita; break;
          case DidControl::Urbanization: col(r) = gaps.urbanization; break;
          case DidControl::Trade: col(r) = gaps.log_trade; break;
          case DidControl::LogDistance: col(r) = std::log(distances->geographic(p.i, p.j)); break;
        }
      }
    }
  }

  DesignMatrix design(n);
  design.add_intercept();
  design.add_column("treat", treat);
  design.add_column("after", after);
  design.add_column("treat_x_after", interaction);
  for (auto c : options.controls) design.add_column(to_string(c), controls.at(c));
  design.set_outcome(y);
  out.classical = ols_fit(design, Covariance::Classical);
  out.robust = ols_fit(design, Covariance::Robust);
  return out;
}

}  // namespace colearn
