#include "colearn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "colearn/causal.hpp"
#include "colearn/error.hpp"
#include "colearn/events.hpp"
#include "colearn/metrics.hpp"
#include "colearn/panel.hpp"
#include "colearn/regression.hpp"
#include "colearn/report.hpp"
#include "colearn/space.hpp"
#include "colearn/synth.hpp"

namespace colearn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return std::isfinite(v) ? format_real(v, 10) : "NA"; }

std::string matrix_csv(const std::string& corner, const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels, const Matrix& m) {
  std::vector<std::string> header{corner};
  header.insert(header.end(), col_labels.begin(), col_labels.end());
  DelimitedTable t(header);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<std::string> row{row_labels[r]};
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
    t.add_row(std::move(row));
  }
  return t.to_string();
}

// One entry or keep candidate with its base-year covariates.
struct EventRow {
  EventRecord record;
  double related = kNaN;          // omega
  double neighbors = kNaN;        // Omega, selected variant
  double ubiquity = kNaN;         // M: provinces active in the industry
  double diversity = kNaN;        // N: industries active in the province
  double neighbor_ratio = kNaN;   // share of adjacent provinces active
  double neighbor_active = kNaN;  // adjacent provinces active
  double neighbor_total = kNaN;   // adjacent provinces
  double related_ratio = kNaN;    // share of industry-space neighbors active
  double related_active = kNaN;
  double related_total = kNaN;
};

class Workspace {
 public:
  explicit Workspace(const PipelineConfig& config) : config_(config) {}

  const PipelineConfig& config() const { return config_; }
  std::string stage = "setup";
  std::map<std::string, std::string> outputs;
  std::map<std::string, std::string> digests;

  void emit(const std::string& name, std::string content) { outputs[name] = std::move(content); }

  std::filesystem::path input(const std::string& name) {
    const auto path = config_.input_dir / name;
    if (!std::filesystem::is_regular_file(path)) throw InputError("missing input file " + path.string());
    digests[name] = sha256_hex(read_file(path));
    return path;
  }
  bool has_input(const std::string& name) const { return std::filesystem::is_regular_file(config_.input_dir / name); }

  const ProvinceRegistry& provinces() {
    if (!provinces_) provinces_ = std::make_unique<ProvinceRegistry>(ProvinceRegistry::read(input("provinces.csv")));
    return *provinces_;
  }
  const IndustryRegistry& industries() {
    if (!industries_)
      industries_ = std::make_unique<IndustryRegistry>(IndustryRegistry::read(input("industries.csv")));
    return *industries_;
  }
  const DistanceTable& distances() {
    if (!distances_)
      distances_ = std::make_unique<DistanceTable>(DistanceTable::read(input("distances.csv"), provinces()));
    return *distances_;
  }
  const MacroTable& macro() {
    if (!macro_) macro_ = std::make_unique<MacroTable>(MacroTable::read(input("macro.csv"), provinces()));
    return *macro_;
  }
  const RailTable& rail() {
    if (!rail_) rail_ = std::make_unique<RailTable>(RailTable::read(input("rail.csv"), provinces()));
    return *rail_;
  }

  /// panel.csv when present, otherwise aggregated from firms.csv.
  const FirmPanel& panel() {
    if (panel_) return *panel_;
    if (has_input("panel.csv")) {
      panel_ = std::make_unique<FirmPanel>(
          read_panel_table(DelimitedTable::read(input("panel.csv")), provinces(), industries()));
      ingested_ = false;
    } else {
      panel_ = std::make_unique<FirmPanel>(ingest_firms(input("firms.csv"), provinces(), industries()));
      ingested_ = true;
    }
    return *panel_;
  }
  bool ingested() {
    panel();
    return ingested_;
  }

  int year() {
    const auto& years = panel().counts.years();
    const int y = config_.year.value_or(years.last);
    if (!years.contains(y))
      throw InputError("year " + std::to_string(y) + " outside the panel (" + std::to_string(years.first) + "-" +
                       std::to_string(years.last) + ")");
    return y;
  }

  const ActivityPanel& activity() {
    if (!activity_) activity_ = std::make_unique<ActivityPanel>(ActivityPanel::from_panel(panel().counts));
    return *activity_;
  }

  /// Proximity used for densities scored at base year t.
  const ProximityMatrix& proximity_for(int t) {
    const int y = config_.proximity.varying ? t : config_.proximity.year.value_or(panel().counts.years().last);
    if (!panel().counts.years().contains(y)) throw InputError("proximity year " + std::to_string(y) + " outside the panel");
    auto it = proximity_.find(y);
    if (it == proximity_.end()) it = proximity_.emplace(y, compute_proximity(panel().counts, y)).first;
    return it->second;
  }

  const IndustrySpaceGraph& space_for(int t) {
    const auto& phi = proximity_for(t);
    const int key = config_.proximity.varying ? t : 0;
    auto it = spaces_.find(key);
    if (it == spaces_.end()) {
      const int y = config_.proximity.varying ? t : config_.proximity.year.value_or(panel().counts.years().last);
      it = spaces_.emplace(key, build_space(phi, y)).first;
    }
    return it->second;
  }

  IndustrySpaceGraph build_space(const ProximityMatrix& phi, int y) {
    const Matrix counts = panel().counts.slice(y);
    std::vector<double> sizes(counts.cols());
    for (Eigen::Index a = 0; a < counts.cols(); ++a) sizes[a] = counts.col(a).sum();
    return superpose(max_spanning_tree(phi).edges, threshold_network(phi, config_.space_cutoff), sizes);
  }

  const std::vector<EventRow>& events();

 private:
  const PipelineConfig& config_;
  std::unique_ptr<ProvinceRegistry> provinces_;
  std::unique_ptr<IndustryRegistry> industries_;
  std::unique_ptr<DistanceTable> distances_;
  std::unique_ptr<MacroTable> macro_;
  std::unique_ptr<RailTable> rail_;
  std::unique_ptr<FirmPanel> panel_;
  bool ingested_ = false;
  std::unique_ptr<ActivityPanel> activity_;
  std::map<int, ProximityMatrix> proximity_;
  std::map<int, IndustrySpaceGraph> spaces_;
  std::unique_ptr<std::vector<EventRow>> events_;
};

const std::vector<EventRow>& Workspace::events() {
  if (events_) return *events_;
  EventOptions options;
  options.horizon = config_.horizon;
  const auto set = detect_events(activity(), options);
  if (set.records.empty()) throw NumericalError("no candidate events: the panel is too short for the window");
  const auto& dist = distances();
  if (dist.provinces() != panel().counts.provinces())
    throw InputError("distance table does not cover every province");

  events_ = std::make_unique<std::vector<EventRow>>();
  auto& rows = *events_;
  rows.reserve(set.records.size());
  int cached_year = std::numeric_limits<int>::min();
  Matrix omega, big_omega, ratio, count;
  DiversityCounts counts;
  const IndustrySpaceGraph* space = nullptr;
  for (const auto& rec : set.records) {
    if (rec.base_year != cached_year) {
      cached_year = rec.base_year;
      const auto& u = activity().at(cached_year);
      omega = density_related_matrix(u, proximity_for(cached_year));
      big_omega = density_neighbors_matrix(u, dist, config_.density);
      ratio = density_neighbors_matrix(u, dist, NeighborWeighting::AdjacencyRatio);
      count = density_neighbors_matrix(u, dist, NeighborWeighting::AdjacencyCount);
      counts = diversity_counts(u);
      space = &space_for(cached_year);
    }
    const auto& u = activity().at(cached_year);
    const auto i = rec.province, a = rec.industry;
    EventRow row;
    row.record = rec;
    row.related = omega(i, a);
    row.neighbors = big_omega(i, a);
    row.ubiquity = counts.ubiquity[a];
    row.diversity = counts.diversity[i];
    row.neighbor_ratio = ratio(i, a);
    row.neighbor_active = count(i, a);
    row.neighbor_total = adjacent_count(dist, i);
    const auto variants = related_variants(u, *space, i, a);
    row.related_active = variants.active;
    row.related_total = variants.total;
    row.related_ratio = variants.total > 0 ? static_cast<double>(variants.active) / variants.total : kNaN;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Stages

void stage_ingest(Workspace& ws) {
  const auto& panel = ws.panel();
  ws.emit("panel.csv", panel_table(panel, ws.provinces(), ws.industries()).to_string());
  const auto& d = panel.diagnostics;
  std::ostringstream out;
  out << "source=" << (ws.ingested() ? "firms.csv" : "panel.csv") << '\n'
      << "years=" << panel.counts.years().first << "-" << panel.counts.years().last << '\n'
      << "rows_read=" << d.rows_read << '\n'
      << "rows_rejected=" << d.rows_rejected << '\n'
      << "observations_outside_listing=" << d.observations_outside_listing << '\n'
      << "missing_employees=" << d.missing_employees << '\n'
      << "missing_revenue=" << d.missing_revenue << '\n';
  for (const auto& m : d.messages) out << m << '\n';
  ws.emit("ingest_diagnostics.txt", out.str());
}

void stage_rca(Workspace& ws) {
  const int y = ws.year();
  const auto rca = compute_rca(ws.panel().counts, y);
  const auto u = compute_activity(rca);
  const auto rows = ws.provinces().labels();
  const auto cols = ws.industries().labels();
  ws.emit("rca_" + std::to_string(y) + ".csv", matrix_csv("province", rows, cols, rca.values));
  ws.emit("activity_" + std::to_string(y) + ".csv", matrix_csv("province", rows, cols, u.values()));
}

void stage_proximity(Workspace& ws) {
  const int y = ws.year();
  const auto phi = compute_proximity(ws.panel().counts, y);
  const auto labels = ws.industries().labels();
  ws.emit("proximity_" + std::to_string(y) + ".csv", matrix_csv("industry", labels, labels, phi.values));
}

void stage_space(Workspace& ws) {
  const int y = ws.year();
  const auto phi = compute_proximity(ws.panel().counts, y);
  const auto graph = ws.build_space(phi, y);
  std::ostringstream edges, graphml;
  write_edge_list(edges, graph, ws.industries());
  write_graphml(graphml, graph, ws.industries());
  ws.emit("space_edges.csv", edges.str());
  ws.emit("space.graphml", graphml.str());
}

void stage_density(Workspace& ws) {
  const int y = ws.year();
  const auto ys = std::to_string(y);
  const auto& u = ws.activity().at(y);
  const auto rows = ws.provinces().labels();
  const auto cols = ws.industries().labels();
  ws.emit("density_related_" + ys + ".csv", matrix_csv("province", rows, cols, density_related_matrix(u, ws.proximity_for(y))));
  ws.emit("density_neighbors_" + ys + ".csv",
          matrix_csv("province", rows, cols, density_neighbors_matrix(u, ws.distances(), ws.config().density)));
  ws.emit("similarity_" + ys + ".csv",
          matrix_csv("province", rows, rows, similarity_matrix(compute_rca(ws.panel().counts, y)).values));
  ws.emit("productivity_density_" + ys + ".csv",
          matrix_csv("province", rows, cols, productivity_density_matrix(ws.panel().productivity, ws.distances(), y)));
}

void stage_events(Workspace& ws) {
  const auto& rows = ws.events();
  DelimitedTable t({"province", "industry", "base_year", "horizon", "kind", "related_density", "neighbor_density",
                    "active_provinces", "active_industries", "neighbor_ratio", "neighbor_active", "neighbor_total",
                    "related_ratio", "related_active", "related_total"});
  const auto& provinces = ws.provinces();
  const auto& industries = ws.industries();
  std::map<std::string, std::size_t> tally;
  for (const auto& r : rows) {
    const auto& rec = r.record;
    tally[to_string(rec.kind())]++;
    t.add_row({provinces[rec.province].abbreviation, industries[rec.industry].code.label(), std::to_string(rec.base_year),
               std::to_string(rec.horizon), to_string(rec.kind()), num(r.related), num(r.neighbors), num(r.ubiquity),
               num(r.diversity), num(r.neighbor_ratio), num(r.neighbor_active), num(r.neighbor_total),
               num(r.related_ratio), num(r.related_active), num(r.related_total)});
  }
  ws.emit("events.csv", t.to_string());
  DelimitedTable summary({"kind", "count"});
  for (const char* k : {"entry-candidate", "entry", "keep-candidate", "keep"})
    summary.add_row({k, std::to_string(tally[k])});
  ws.emit("events_summary.csv", summary.to_string());
}

std::string curve_csv(const BinnedCurve& c) {
  DelimitedTable t({"bin", "lower", "upper", "probability", "std_error", "count", "sparse"});
  for (std::size_t b = 0; b < c.bins.size(); ++b) {
    const auto& bin = c.bins[b];
    t.add_row({std::to_string(b + 1), num(bin.lower), num(bin.upper), num(bin.mean), num(bin.std_error),
               std::to_string(bin.count), bin.sparse ? "1" : "0"});
  }
  return t.to_string();
}

// Fixed-bin histograms of a density for realized vs unrealized candidates.
std::string histogram_csv(const std::vector<double>& x, const std::vector<double>& y, std::size_t n_bins) {
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(n_bins);
  std::vector<std::size_t> yes(n_bins, 0), no(n_bins, 0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::size_t b = width > 0 ? static_cast<std::size_t>(std::floor((x[k] - lo) / width)) : 0;
    b = std::min(b, n_bins - 1);
    (y[k] > 0.5 ? yes : no)[b]++;
  }
  DelimitedTable t({"bin", "lower", "upper", "realized", "not_realized"});
  for (std::size_t b = 0; b < n_bins; ++b)
    t.add_row({std::to_string(b + 1), num(lo + width * b), num(b + 1 == n_bins ? hi : lo + width * (b + 1)),
               std::to_string(yes[b]), std::to_string(no[b])});
  return t.to_string();
}

void stage_curves(Workspace& ws) {
  const auto& rows = ws.events();
  const auto bins = ws.config().bins;
  std::vector<double> w, W, outcome, w_grid, W_grid, outcome_grid;
  std::vector<double> w_entry, w_none, W_entry, W_none;
  for (const auto& r : rows) {
    if (!r.record.entry_candidate) continue;
    const double o = r.record.realized ? 1.0 : 0.0;
    if (std::isfinite(r.related)) {
      w.push_back(r.related);
      (o > 0 ? w_entry : w_none).push_back(r.related);
    }
    if (std::isfinite(r.neighbors)) {
      W.push_back(r.neighbors);
      (o > 0 ? W_entry : W_none).push_back(r.neighbors);
    }
    if (std::isfinite(r.related) && std::isfinite(r.neighbors)) {
      w_grid.push_back(r.related);
      W_grid.push_back(r.neighbors);
      outcome_grid.push_back(o);
    }
  }
  auto outcomes_for = [&](bool related) {
    std::vector<double> o;
    for (const auto& r : rows)
      if (r.record.entry_candidate && std::isfinite(related ? r.related : r.neighbors))
        o.push_back(r.record.realized ? 1.0 : 0.0);
    return o;
  };
  if (w.empty() || W.empty()) throw NumericalError("no entry candidates with defined densities");
  const auto o_related = outcomes_for(true);
  const auto o_neighbors = outcomes_for(false);
  ws.emit("curve_related.csv", curve_csv(binned_curve(w, o_related, bins)));
  ws.emit("curve_neighbors.csv", curve_csv(binned_curve(W, o_neighbors, bins)));
  ws.emit("hist_related.csv", histogram_csv(w, o_related, bins));
  ws.emit("hist_neighbors.csv", histogram_csv(W, o_neighbors, bins));

  const auto grid = joint_grid(W_grid, w_grid, outcome_grid, bins, bins);
  DelimitedTable g({"related_lower", "related_upper", "neighbors_lower", "neighbors_upper", "count", "probability"});
  for (std::size_t r = 0; r < bins; ++r)
    for (std::size_t c = 0; c < bins; ++c)
      g.add_row({num(grid.y_edges[r]), num(grid.y_edges[r + 1]), num(grid.x_edges[c]), num(grid.x_edges[c + 1]),
                 std::to_string(grid.counts(r, c)), num(grid.probability(r, c))});
  ws.emit("joint_grid.csv", g.to_string());

  // Similarity vs geography in the output year.
  const int y = ws.year();
  const auto sim = similarity_matrix(compute_rca(ws.panel().counts, y));
  const auto& dist = ws.distances();
  const auto& provinces = ws.provinces();
  DelimitedTable pairs({"province_i", "province_j", "distance_km", "adjacent", "similarity"});
  std::vector<double> d, s, s_adj, s_far;
  for (std::size_t i = 0; i < provinces.size(); ++i)
    for (std::size_t j = i + 1; j < provinces.size(); ++j) {
      const double v = sim.values(i, j);
      pairs.add_row({provinces[i].abbreviation, provinces[j].abbreviation, num(dist.geographic(i, j)),
                     dist.adjacent(i, j) ? "1" : "0", num(v)});
      d.push_back(dist.geographic(i, j));
      s.push_back(v);
      (dist.adjacent(i, j) ? s_adj : s_far).push_back(v);
    }
  ws.emit("similarity_distance.csv", pairs.to_string());

  DelimitedTable stats({"statistic", "group_a", "group_b", "n_a", "n_b", "value", "p_value"});
  auto anova_row = [&](const std::string& name, const std::vector<double>& a, const std::vector<double>& b) {
    const auto res = anova_two_group(a, b);
    stats.add_row({name, "realized_or_adjacent", "other", std::to_string(a.size()), std::to_string(b.size()),
                   num(res.f), num(res.p)});
  };
  anova_row("anova_related_density", w_entry, w_none);
  anova_row("anova_neighbor_density", W_entry, W_none);
  anova_row("anova_similarity_adjacent_" + std::to_string(y), s_adj, s_far);
  stats.add_row({"pearson_similarity_distance_" + std::to_string(y), "", "", std::to_string(d.size()), "",
                 num(pearson_r(d, s)), "NA"});
  ws.emit("statistics.csv", stats.to_string());
}

// Probit column: covariate names pulled from an event row.
struct ProbitSpec {
  std::string title;
  bool entry = true;
  std::vector<std::string> columns;
};

double covariate(const EventRow& r, const std::string& name) {
  if (name == "related_density") return r.related;
  if (name == "neighbor_density") return r.neighbors;
  if (name == "active_provinces") return r.ubiquity;
  if (name == "active_industries") return r.diversity;
  if (name == "interaction_density") return r.neighbors * r.related;
  if (name == "neighbor_ratio") return r.neighbor_ratio;
  if (name == "related_ratio") return r.related_ratio;
  if (name == "interaction_ratio") return r.neighbor_ratio * r.related_ratio;
  if (name == "neighbor_active") return r.neighbor_active;
  if (name == "related_active") return r.related_active;
  if (name == "interaction_active") return r.neighbor_active * r.related_active;
  if (name == "neighbor_total") return r.neighbor_total;
  if (name == "related_total") return r.related_total;
  if (name == "interaction_total") return r.neighbor_total * r.related_total;
  throw std::logic_error("unknown covariate " + name);
}

const std::vector<ReportRow>& probit_rows() {
  static const std::vector<ReportRow> rows = {
      {"neighbor_density", "Density of active neighboring provinces"},
      {"related_density", "Density of active related industries"},
      {"interaction_density", "Interaction term 1"},
      {"neighbor_ratio", "Ratio of active neighboring provinces"},
      {"related_ratio", "Ratio of active related industries"},
      {"interaction_ratio", "Interaction term 2"},
      {"neighbor_active", "Number of active neighboring provinces"},
      {"related_active", "Number of active related industries"},
      {"interaction_active", "Interaction term 3"},
      {"neighbor_total", "Number of neighboring provinces"},
      {"related_total", "Number of related industries"},
      {"interaction_total", "Interaction term 4"},
      {"active_provinces", "Number of active provinces in industry"},
      {"active_industries", "Number of active industries in province"},
      {"intercept", "Constant"},
  };
  return rows;
}

RegressionResult fit_probit(const std::vector<EventRow>& rows, const ProbitSpec& spec) {
  std::vector<const EventRow*> used;
  for (const auto& r : rows) {
    if (r.record.entry_candidate != spec.entry) continue;
    bool ok = true;
    for (const auto& c : spec.columns) ok = ok && std::isfinite(covariate(r, c));
    if (ok) used.push_back(&r);
  }
  if (used.empty()) throw NumericalError("probit '" + spec.title + "': no observations");
  const auto n = used.size();
  DesignMatrix design(n);
  design.add_intercept();
  for (const auto& c : spec.columns) {
    Eigen::VectorXd col(n);
    for (std::size_t k = 0; k < n; ++k) col(k) = covariate(*used[k], c);
    design.add_column(c, col);
  }
  std::vector<int> years(n);
  Eigen::VectorXd y(n);
  for (std::size_t k = 0; k < n; ++k) {
    years[k] = used[k]->record.base_year;
    y(k) = used[k]->record.realized ? 1.0 : 0.0;
  }
  design.add_year_effects(years);
  design.set_outcome(y);
  try {
    return probit_fit(design);
  } catch (const NumericalError& e) {
    throw NumericalError("probit '" + spec.title + "': " + e.what());
  }
}

void emit_probit_table(Workspace& ws, const std::string& name, const std::string& caption,
                       const std::vector<ProbitSpec>& specs) {
  const auto& rows = ws.events();
  std::vector<RegressionResult> results;
  for (const auto& s : specs) results.push_back(fit_probit(rows, s));
  std::vector<ReportColumn> cols;
  auto doc = nlohmann::json::array();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    cols.push_back({specs[k].title, &results[k]});
    auto j = to_json(results[k]);
    j["title"] = specs[k].title;
    j["outcome"] = specs[k].entry ? "entry" : "keep";
    doc.push_back(j);
  }
  ws.emit(name + ".txt", regression_table(caption, cols, probit_rows(), true));
  ws.emit(name + ".json", doc.dump(2) + "\n");
}

void stage_probit(Workspace& ws) {
  const std::vector<std::string> r1 = {"related_density"};
  const std::vector<std::string> r2 = {"related_density", "active_provinces"};
  const std::vector<std::string> r3 = {"related_density", "active_provinces", "active_industries"};
  emit_probit_table(ws, "probit_related", "Probit: developing (1-3) or keeping (4-6) an industry, related industries",
                    {{"Entry", true, r1}, {"Entry", true, r2}, {"Entry", true, r3},
                     {"Keep", false, r1}, {"Keep", false, r2}, {"Keep", false, r3}});

  const std::vector<std::string> n1 = {"neighbor_density"};
  const std::vector<std::string> n2 = {"neighbor_density", "active_industries"};
  const std::vector<std::string> n3 = {"neighbor_density", "active_industries", "active_provinces"};
  emit_probit_table(ws, "probit_neighbors",
                    "Probit: developing (1-3) or keeping (4-6) an industry, neighboring provinces",
                    {{"Entry", true, n1}, {"Entry", true, n2}, {"Entry", true, n3},
                     {"Keep", false, n1}, {"Keep", false, n2}, {"Keep", false, n3}});

  emit_probit_table(
      ws, "probit_interaction", "Probit: developing an industry, both channels and their interaction",
      {{"Densities", true, {"neighbor_density", "related_density"}},
       {"Densities", true, {"neighbor_density", "related_density", "interaction_density"}},
       {"Ratios", true, {"neighbor_ratio", "related_ratio"}},
       {"Ratios", true, {"neighbor_ratio", "related_ratio", "interaction_ratio"}},
       {"Active counts", true, {"neighbor_active", "related_active", "interaction_active"}},
       {"Totals", true, {"neighbor_total", "related_total", "interaction_total"}}});
}

// Pair-year outcomes over the event-study window.
std::vector<PairYearValue> pair_panel(Workspace& ws, bool productivity, int first, int last) {
  std::vector<PairYearValue> out;
  const auto& panel = ws.panel();
  const auto P = panel.counts.provinces();
  for (int t = first; t <= last; ++t) {
    if (panel.counts.total(t) == 0) continue;
    Matrix sim;
    if (!productivity) sim = similarity_matrix(compute_rca(panel.counts, t)).values;
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = i + 1; j < P; ++j) {
        if (productivity) {
          if (auto p = pair_productivity(panel.productivity, i, j, t)) out.push_back({i, j, t, *p});
        } else {
          out.push_back({i, j, t, sim(i, j)});
        }
      }
  }
  return out;
}

void stage_event_study(Workspace& ws) {
  const auto& cfg = ws.config();
  const auto& years = ws.panel().counts.years();
  const int first = std::max(years.first, cfg.event_study_first);
  EventStudyOptions options;
  options.baseline_year = cfg.baseline_year;
  options.treatment_year = cfg.treatment_year;
  if (!years.contains(options.baseline_year) || first > options.baseline_year)
    throw InputError("baseline year " + std::to_string(options.baseline_year) + " outside the event-study window");
  nlohmann::json doc;
  for (bool productivity : {false, true}) {
    const std::string name = productivity ? "productivity" : "similarity";
    const auto panel = pair_panel(ws, productivity, first, years.last);
    const auto res = event_study(panel, ws.rail(), options);
    DelimitedTable t({"year", "beta", "std_error", "lower", "upper", "p_value"});
    for (const auto& p : res.points)
      t.add_row({std::to_string(p.year), num(p.beta), num(p.std_error), num(p.lower), num(p.upper), num(p.p_value)});
    ws.emit("event_study_" + name + ".csv", t.to_string());
    doc[name] = to_json(res);
  }
  ws.emit("event_study.json", doc.dump(2) + "\n");
}

std::vector<DidPair> did_pairs(Workspace& ws, bool productivity) {
  const auto& cfg = ws.config();
  const auto& panel = ws.panel();
  for (int y : {cfg.did_before, cfg.did_after})
    if (!panel.counts.years().contains(y)) throw InputError("DID year " + std::to_string(y) + " outside the panel");
  const auto P = panel.counts.provinces();
  std::vector<DidPair> pairs;
  if (productivity) {
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = i + 1; j < P; ++j) {
        const auto before = pair_productivity(panel.productivity, i, j, cfg.did_before);
        const auto after = pair_productivity(panel.productivity, i, j, cfg.did_after);
        if (before && after) pairs.push_back({i, j, *before, *after});
      }
  } else {
    const Matrix before = similarity_matrix(compute_rca(panel.counts, cfg.did_before)).values;
    const Matrix after = similarity_matrix(compute_rca(panel.counts, cfg.did_after)).values;
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = i + 1; j < P; ++j) pairs.push_back({i, j, before(i, j), after(i, j)});
  }
  return pairs;
}

const std::vector<ReportRow>& did_rows() {
  static const std::vector<ReportRow> rows = {
      {"treat_x_after", "High-speed rail entry"},
      {"treat", "Treatment group"},
      {"after", "After entry"},
      {"gap_log_population", "Gap in population (log)"},
      {"gap_log_gdp_pc", "Gap in GDP per capita (log)"},
      {"gap_urbanization", "Gap in urbanization"},
      {"gap_log_trade", "Gap in trade (log)"},
      {"log_distance", "Geographic distance (log)"},
      {"intercept", "Constant"},
  };
  return rows;
}

void stage_did(Workspace& ws) {
  const auto& cfg = ws.config();
  DidOptions base;
  base.before_year = cfg.did_before;
  base.after_year = cfg.did_after;
  base.treatment_year = cfg.treatment_year;
  using C = DidControl;
  const std::vector<std::vector<DidControl>> control_sets = {
      {}, {C::Population, C::GdpPerCapita}, {C::Urbanization, C::Trade}};

  std::vector<DidResult> main, distance;
  std::vector<std::string> titles, distance_titles;
  nlohmann::json doc = nlohmann::json::array();
  for (bool productivity : {false, true}) {
    const auto pairs = did_pairs(ws, productivity);
    const std::string outcome = productivity ? "Productivity" : "Similarity";
    for (const auto& controls : control_sets) {
      auto options = base;
      options.controls = controls;
      main.push_back(did_estimate(pairs, ws.rail(), options, &ws.macro(), &ws.distances()));
      titles.push_back(outcome);
    }
    auto options = base;
    options.controls = {C::LogDistance};
    distance.push_back(did_estimate(pairs, ws.rail(), options, &ws.macro(), &ws.distances()));
    distance_titles.push_back(outcome);
  }
  auto record = [&](const std::string& table, const std::string& title, const DidResult& r) {
    doc.push_back({{"table", table},
                   {"outcome", title},
                   {"robust", to_json(r.robust)},
                   {"classical", to_json(r.classical)},
                   {"group_means", to_json(r.means)}});
  };
  std::vector<ReportColumn> cols, dist_cols;
  for (std::size_t k = 0; k < main.size(); ++k) {
    cols.push_back({titles[k], &main[k].robust});
    record("did", titles[k], main[k]);
  }
  for (std::size_t k = 0; k < distance.size(); ++k) {
    dist_cols.push_back({distance_titles[k], &distance[k].robust});
    record("did_distance", distance_titles[k], distance[k]);
  }
  const auto years = std::to_string(cfg.did_before) + " and " + std::to_string(cfg.did_after);
  ws.emit("did_table.txt",
          regression_table("DID: rail entry on similarity (1-3) and productivity (4-6), " + years +
                               "; robust standard errors",
                           cols, did_rows(), false));
  ws.emit("did_distance_table.txt",
          regression_table("DID with distance control, " + years + "; robust standard errors", dist_cols, did_rows(),
                           false));
  ws.emit("did.json", doc.dump(2) + "\n");

  // Yearly group means of similarity.
  const auto& panel = ws.panel();
  const auto& rail = ws.rail();
  const auto P = panel.counts.provinces();
  DelimitedTable means({"year", "treated_similarity", "control_similarity", "difference"});
  for (int t = panel.counts.years().first; t <= panel.counts.years().last; ++t) {
    if (panel.counts.total(t) == 0) continue;
    const Matrix sim = similarity_matrix(compute_rca(panel.counts, t)).values;
    double st = 0, sc = 0;
    std::size_t nt = 0, nc = 0;
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = i + 1; j < P; ++j) {
        if (rail.connected(i, j, cfg.treatment_year)) {
          st += sim(i, j);
          ++nt;
        } else {
          sc += sim(i, j);
          ++nc;
        }
      }
    const double mt = nt ? st / nt : kNaN, mc = nc ? sc / nc : kNaN;
    means.add_row({std::to_string(t), num(mt), num(mc), num(mt - mc)});
  }
  ws.emit("did_group_means.csv", means.to_string());
}

void stage_synth(Workspace& ws) {
  ScenarioConfig sc;
  sc.seed = ws.config().seed;
  for (auto& [name, content] : render_scenario(generate(sc))) ws.emit(name, std::move(content));
}

using Stage = std::function<void(Workspace&)>;

const std::vector<std::pair<std::string, Stage>>& stages() {
  static const std::vector<std::pair<std::string, Stage>> table = {
      {"ingest", stage_ingest},   {"rca", stage_rca},       {"proximity", stage_proximity},
      {"space", stage_space},     {"density", stage_density}, {"events", stage_events},
      {"curves", stage_curves},   {"probit", stage_probit}, {"event-study", stage_event_study},
      {"did", stage_did},         {"synth", stage_synth},
  };
  return table;
}

void commit(const std::map<std::string, std::string>& files, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) {
    const auto tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      if (!out) throw InputError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, dir / name, ec);
    if (ec) throw InputError("cannot write " + (dir / name).string() + ": " + ec.message());
  }
}

std::string escape(std::string s) {
  for (auto& c : s) {
    if (c == '"') c = '\'';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

ProximitySpec ProximitySpec::parse(const std::string& text) {
  ProximitySpec spec;
  if (text == "varying") {
    spec.varying = true;
    return spec;
  }
  if (text == "fixed") return spec;
  if (text.rfind("fixed:", 0) == 0) {
    spec.year = static_cast<int>(parse_integer(text.substr(6), "--proximity"));
    return spec;
  }
  throw std::invalid_argument("invalid proximity mode '" + text + "' (expected fixed:<year> or varying)");
}

std::string ProximitySpec::to_string() const {
  if (varying) return "varying";
  return year ? "fixed:" + std::to_string(*year) : "fixed";
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j = {{"input_dir", input_dir.generic_string()},
                      {"out_dir", out_dir.generic_string()},
                      {"horizon", horizon},
                      {"proximity", proximity.to_string()},
                      {"density", colearn::to_string(density)},
                      {"bins", bins},
                      {"did_years", {did_before, did_after}},
                      {"seed", seed},
                      {"treatment_year", treatment_year},
                      {"baseline_year", baseline_year},
                      {"event_study_first", event_study_first},
                      {"space_cutoff", space_cutoff}};
  j["year"] = year ? nlohmann::json(*year) : nlohmann::json(nullptr);
  return j;
}

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> commands = {"ingest", "rca",         "proximity", "space", "density", "events",
                                                    "curves", "probit",      "event-study", "did", "synth",   "all"};
  return commands;
}

std::string StageFailure::line() const {
  return "error: kind=" + kind_ + " stage=" + stage_ + " message=\"" + escape(what()) + "\"";
}

int StageFailure::exit_code() const {
  if (kind_ == "input") return 2;
  if (kind_ == "numerical") return 3;
  return 1;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 15];
  }
  return out;
}

std::map<std::string, std::string> run_pipeline(const std::string& command, const PipelineConfig& config) {
  const auto& commands = pipeline_commands();
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw StageFailure("usage", "setup", "unknown command '" + command + "'");

  Workspace ws(config);
  try {
    if (config.horizon < 1) throw std::invalid_argument("horizon must be positive");
    if (config.bins < 1) throw std::invalid_argument("bins must be positive");
    if (config.did_after <= config.did_before) throw std::invalid_argument("DID years must be increasing");
    for (const auto& [name, stage] : stages()) {
      if (name == command || (command == "all" && name != "synth")) {
        ws.stage = name;
        stage(ws);
      }
    }
    ws.stage = "manifest";
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = config.to_json();
    manifest["inputs"] = ws.digests;
    nlohmann::json outputs = nlohmann::json::object();
    for (const auto& [name, content] : ws.outputs) outputs[name] = sha256_hex(content);
    manifest["outputs"] = outputs;
    ws.emit("manifest.json", manifest.dump(2) + "\n");
    ws.stage = "write";
    commit(ws.outputs, config.out_dir);
  } catch (const InputError& e) {
    throw StageFailure("input", ws.stage, e.what());
  } catch (const NumericalError& e) {
    throw StageFailure("numerical", ws.stage, e.what());
  } catch (const std::invalid_argument& e) {
    throw StageFailure("usage", ws.stage, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageFailure("input", ws.stage, e.what());
  } catch (const StageFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure("internal", ws.stage, e.what());
  }
  return ws.outputs;
}

}  // namespace colearn
