#include <doctest.h>

#include <cmath>

#include "colearn/causal.hpp"
#include "colearn/error.hpp"
#include "support.hpp"

using namespace colearn;

namespace {

/// Six provinces; pairs (0,1), (0,2), (1,2) get rail in 2010, all others never.
RailTable rail_of_three() {
  RailTable rail(6);
  rail.set(0, 1, 2010);
  rail.set(0, 2, 2010);
  rail.set(1, 2, 2010);
  return rail;
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) v.push_back({i, j});
  return v;
}

}  // namespace

TEST_CASE("did reproduces the difference of group means") {
  const auto rail = rail_of_three();
  std::vector<DidPair> pairs;
  for (auto [i, j] : all_pairs(6)) {
    const bool treated = rail.connected(i, j, 2015);
    pairs.push_back({i, j, treated ? 11.0 : 10.0, treated ? 15.0 : 12.0});
  }
  const auto r = did_estimate(pairs, rail, {});
  CHECK(std::abs(r.classical["treat_x_after"].estimate - 2.0) <= 1e-12);
  CHECK(std::abs(r.means.difference_in_differences() - 2.0) <= 1e-12);
  CHECK(r.means.treated_pairs == 3);
  CHECK(r.means.control_pairs == 12);
}

TEST_CASE("identical trajectories give a zero did") {
  const auto rail = rail_of_three();
  std::vector<DidPair> pairs;
  for (auto [i, j] : all_pairs(6)) pairs.push_back({i, j, 5.0, 7.5});
  const auto r = did_estimate(pairs, rail, {});
  CHECK(std::abs(r.classical["treat_x_after"].estimate) <= 1e-12);
}

TEST_CASE("did matches group means on noisy data") {
  Random rng(157);
  const auto rail = rail_of_three();
  std::vector<DidPair> pairs;
  for (auto [i, j] : all_pairs(6)) pairs.push_back({i, j, rng.normal(3, 1), rng.normal(4, 1)});
  const auto r = did_estimate(pairs, rail, {});
  CHECK(std::abs(r.classical["treat_x_after"].estimate - r.means.difference_in_differences()) <= 1e-12);
  CHECK(r.robust["treat_x_after"].estimate == r.classical["treat_x_after"].estimate);
}

TEST_CASE("did needs both groups") {
  RailTable none(4);
  std::vector<DidPair> pairs;
  for (auto [i, j] : all_pairs(4)) pairs.push_back({i, j, 1.0, 2.0});
  CHECK_THROWS_AS(did_estimate(pairs, none, {}), NumericalError);
}

TEST_CASE("did controls need their tables") {
  const auto rail = rail_of_three();
  std::vector<DidPair> pairs;
  for (auto [i, j] : all_pairs(6)) pairs.push_back({i, j, 1.0, 2.0});
  DidOptions opt;
  opt.controls = {DidControl::Population};
  CHECK_THROWS(did_estimate(pairs, rail, opt));
}

TEST_CASE("event study with identical groups is flat") {
  const auto rail = rail_of_three();
  std::vector<PairYearValue> panel;
  for (auto [i, j] : all_pairs(6))
    for (int t = 2000; t <= 2010; ++t) panel.push_back({i, j, t, 0.1 * (t - 2000) + static_cast<double>(i)});
  EventStudyOptions opt;
  opt.baseline_year = 2005;
  const auto r = event_study(panel, rail, opt);
  REQUIRE(r.points.size() == 11);
  for (const auto& p : r.points) CHECK(std::abs(p.beta) <= 1e-10);
}

TEST_CASE("event study recovers a post-baseline shift") {
  const auto rail = rail_of_three();
  const double c = 0.7;
  for (bool two_way : {true, false}) {
    // The interaction-only design has no year effects, so the common trend is
    // left out there.
    std::vector<PairYearValue> panel;
    for (auto [i, j] : all_pairs(6)) {
      const bool treated = rail.connected(i, j, 2015);
      for (int t = 2000; t <= 2010; ++t)
        panel.push_back({i, j, t, 1.0 + (two_way ? 0.2 * (t - 2000) : 0.0) + (treated && t > 2005 ? c : 0.0)});
    }
    EventStudyOptions opt;
    opt.baseline_year = 2005;
    opt.two_way = two_way;
    const auto r = event_study(panel, rail, opt);
    for (const auto& p : r.points) CHECK(std::abs(p.beta - (p.year > 2005 ? c : 0.0)) <= 1e-9);
    CHECK(r.treated_pairs == 3);
    CHECK(r.control_pairs == 12);
  }
}

TEST_CASE("event study baseline must be in the panel") {
  const auto rail = rail_of_three();
  std::vector<PairYearValue> panel;
  for (auto [i, j] : all_pairs(6))
    for (int t = 2000; t <= 2003; ++t) panel.push_back({i, j, t, 1.0});
  EventStudyOptions opt;
  opt.baseline_year = 1990;
  CHECK_THROWS(event_study(panel, rail, opt));
}
