#include "colearn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace colearn {
namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

const Coefficient* lookup(const RegressionResult& r, const std::string& name) {
  for (const auto& c : r.coefficients)
    if (c.name == name) return &c;
  return nullptr;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string format_estimate(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  if (std::abs(v) >= 1000.0)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000" || s == "-0") s.erase(0, 1);
  return s;
}

std::string regression_table(const std::string& caption, const std::vector<ReportColumn>& columns,
                             const std::vector<ReportRow>& rows, bool year_effects) {
  std::vector<std::vector<std::string>> grid;  // first cell is the label
  auto add = [&](std::vector<std::string> line) { grid.push_back(std::move(line)); };

  std::vector<std::string> numbers{""}, titles{""};
  for (std::size_t c = 0; c < columns.size(); ++c) {
    numbers.push_back("(" + std::to_string(c + 1) + ")");
    titles.push_back(columns[c].title);
  }
  add(numbers);
  add(titles);
  add({});

  for (const auto& row : rows) {
    std::vector<std::string> est{row.label}, se{""};
    bool any = false;
    for (const auto& col : columns) {
      const auto* c = lookup(*col.result, row.coefficient);
      if (!c) {
        est.emplace_back();
        se.emplace_back();
        continue;
      }
      any = true;
      est.push_back(format_estimate(c->estimate) + significance_stars(c->p_value));
      se.push_back("(" + format_estimate(c->std_error) + ")");
    }
    if (!any) continue;
    add(est);
    add(se);
  }
  add({});
  if (year_effects) {
    std::vector<std::string> fe{"Year fixed effects"};
    for (std::size_t c = 0; c < columns.size(); ++c) fe.push_back("Yes");
    add(fe);
  }
  std::vector<std::string> obs{"Observations"};
  for (const auto& col : columns) obs.push_back(std::to_string(col.result->n));
  add(obs);

  const bool probit = !columns.empty() && columns.front().result->model == ModelKind::Probit;
  if (probit) {
    std::vector<std::string> r2{"Pseudo R2"}, ll{"Log likelihood"};
    for (const auto& col : columns) {
      r2.push_back(format_estimate(col.result->pseudo_r2));
      ll.push_back(format_estimate(col.result->log_likelihood));
    }
    add(r2);
    add(ll);
  } else {
    std::vector<std::string> r2{"R2"}, rmse{"RMSE"};
    for (const auto& col : columns) {
      r2.push_back(format_estimate(col.result->r2));
      rmse.push_back(format_estimate(col.result->rmse));
    }
    add(r2);
    add(rmse);
  }

  std::size_t label_width = 0, cell_width = 0;
  for (const auto& line : grid) {
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (k == 0)
        label_width = std::max(label_width, line[k].size());
      else
        cell_width = std::max(cell_width, line[k].size());
    }
  }
  cell_width += 2;
  const std::size_t total = label_width + cell_width * columns.size();

  std::ostringstream out;
  out << caption << '\n' << std::string(total, '=') << '\n';
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const auto& line = grid[r];
    if (line.empty()) {
      out << std::string(total, '-') << '\n';
      continue;
    }
    std::string text = pad_right(line[0], label_width);
    for (std::size_t k = 1; k < line.size(); ++k) text += pad_left(line[k], cell_width);
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  }
  out << std::string(total, '=') << '\n';
  out << "Standard errors in parentheses. * p<0.1, ** p<0.05, *** p<0.01\n";
  return out.str();
}

nlohmann::json to_json(const RegressionResult& result) {
  nlohmann::json j;
  j["model"] = result.model == ModelKind::Probit ? "probit" : "ols";
  j["covariance"] = result.covariance == Covariance::Robust ? "robust" : "classical";
  j["n"] = result.n;
  auto coefs = nlohmann::json::array();
  for (const auto& c : result.coefficients) {
    coefs.push_back({{"name", c.name},
                     {"estimate", number(c.estimate)},
                     {"std_error", number(c.std_error)},
                     {"statistic", number(c.statistic)},
                     {"p_value", number(c.p_value)},
                     {"stars", significance_stars(c.p_value)}});
  }
  j["coefficients"] = coefs;
  if (result.model == ModelKind::Probit) {
    j["log_likelihood"] = number(result.log_likelihood);
    j["null_log_likelihood"] = number(result.null_log_likelihood);
    j["pseudo_r2"] = number(result.pseudo_r2);
    j["iterations"] = result.iterations;
  } else {
    j["r2"] = number(result.r2);
    j["rmse"] = number(result.rmse);
  }
  return j;
}

nlohmann::json to_json(const GroupMeans& m) {
  return {{"control_before", number(m.control_before)}, {"control_after", number(m.control_after)},
          {"treated_before", number(m.treated_before)}, {"treated_after", number(m.treated_after)},
          {"control_pairs", m.control_pairs},           {"treated_pairs", m.treated_pairs},
          {"difference_in_differences", number(m.difference_in_differences())}};
}

nlohmann::json to_json(const EventStudyResult& r) {
  auto trend = [](const TrendFit& t) {
    return nlohmann::json{{"first_year", t.first_year}, {"last_year", t.last_year}, {"points", t.points},
                          {"slope", number(t.slope)},   {"std_error", number(t.std_error)},
                          {"p_value", number(t.p_value)}};
  };
  auto points = nlohmann::json::array();
  for (const auto& p : r.points)
    points.push_back({{"year", p.year},
                      {"beta", number(p.beta)},
                      {"std_error", number(p.std_error)},
                      {"lower", number(p.lower)},
                      {"upper", number(p.upper)},
                      {"p_value", number(p.p_value)}});
  return {{"points", points},
          {"pre_trend", trend(r.pre_trend)},
          {"post_trend", trend(r.post_trend)},
          {"treated_pairs", r.treated_pairs},
          {"control_pairs", r.control_pairs},
          {"regression", to_json(r.regression)}};
}

}  // namespace colearn
