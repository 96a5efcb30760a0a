#include <doctest.h>

#include <cmath>

#include "colearn/error.hpp"
#include "colearn/events.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace colearn;

namespace {

/// One cell observed over `history`, first year 2000.
ActivityPanel single_cell(const std::vector<int>& history) {
  std::vector<ActivityMatrix> ms;
  for (int v : history) ms.push_back(ActivityMatrix::from_indicators(Matrix::Constant(1, 1, v)));
  return ActivityPanel({2000, 2000 + static_cast<int>(history.size()) - 1}, ms);
}

const EventRecord* at_base(const EventSet& set, int year) {
  for (const auto& r : set.records)
    if (r.base_year == year) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("entry when absent three years and present three years after the horizon") {
  //                          t-2 t-1 t  +1 +2 +3 +4 +5 +6 +7
  const auto set = detect_events(single_cell({0, 0, 0, 0, 0, 0, 0, 1, 1, 1}));
  const auto* r = at_base(set, 2002);
  REQUIRE(r != nullptr);
  CHECK(r->kind() == EventKind::Entry);
}

TEST_CASE("all-zero history is a candidate without entry") {
  const auto set = detect_events(single_cell(std::vector<int>(10, 0)));
  const auto* r = at_base(set, 2002);
  REQUIRE(r != nullptr);
  CHECK(r->kind() == EventKind::EntryCandidate);
}

TEST_CASE("a gap in the forward window blocks the entry") {
  const auto set = detect_events(single_cell({0, 0, 0, 0, 0, 0, 0, 1, 0, 1}));
  const auto* r = at_base(set, 2002);
  REQUIRE(r != nullptr);
  CHECK(r->kind() == EventKind::EntryCandidate);
}

TEST_CASE("keep events") {
  auto set = detect_events(single_cell({1, 0, 1, 0, 0, 0, 0, 1, 0, 0}));
  const auto* r = at_base(set, 2002);
  REQUIRE(r != nullptr);
  CHECK(r->kind() == EventKind::Keep);

  EventOptions strict;
  strict.strict_keep = true;
  set = detect_events(single_cell({1, 0, 1, 0, 0, 0, 0, 1, 0, 0}), strict);
  CHECK(at_base(set, 2002)->kind() == EventKind::KeepCandidate);
}

TEST_CASE("cells present before t but not at t are neither") {
  const auto set = detect_events(single_cell({1, 0, 0, 0, 0, 0, 0, 1, 1, 1}));
  CHECK(at_base(set, 2002) == nullptr);
}

TEST_CASE("windows leaving the panel are skipped and counted") {
  const auto set = detect_events(single_cell(std::vector<int>(10, 0)));
  // Only base year 2002 has a full [t-2, t+7] window in 2000..2009.
  CHECK(set.records.size() == 1);
  CHECK(set.skipped_cells == 9);
}

TEST_CASE("detector matches the window scan on random panels") {
  Random rng(83);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Matrix> raw;
    std::vector<ActivityMatrix> ms;
    for (int t = 0; t < 15; ++t) {
      raw.push_back(testing::random_binary(rng, 4, 5, 0.4));
      ms.push_back(ActivityMatrix::from_indicators(raw.back()));
    }
    const ActivityPanel panel({1990, 2004}, ms);
    for (int h : {1, 3, 5}) {
      EventOptions opt;
      opt.horizon = h;
      CHECK(detect_events(panel, opt).records == reference::scan_events(raw, 1990, h));
    }
  }
}

TEST_CASE("entry and keep candidates never share a cell-year") {
  Random rng(89);
  std::vector<ActivityMatrix> ms;
  for (int t = 0; t < 12; ++t) ms.push_back(ActivityMatrix::from_indicators(testing::random_binary(rng, 5, 5)));
  const auto set = detect_events(ActivityPanel({2000, 2011}, ms));
  for (std::size_t k = 1; k < set.records.size(); ++k) {
    const auto& a = set.records[k - 1];
    const auto& b = set.records[k];
    CHECK((a.base_year != b.base_year || a.province != b.province || a.industry != b.industry));
  }
}

TEST_CASE("binned curve examples") {
  const std::vector<double> x{0.1, 0.9}, y{0, 1};
  const auto curve = binned_curve(x, y, 2);
  REQUIRE(curve.bins.size() == 2);
  CHECK(curve.bins[0].mean == 0.0);
  CHECK(curve.bins[1].mean == 1.0);
  CHECK(curve.bins[0].lower == 0.1);
  CHECK(curve.bins[1].upper == 0.9);

  const std::vector<double> xs{0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, ones(6, 1.0);
  for (const auto& b : binned_curve(xs, ones, 3).bins) {
    CHECK(b.mean == 1.0);
    CHECK(b.std_error == 0.0);
    CHECK(b.sparse);
  }
  const std::vector<double> none;
  CHECK_THROWS(binned_curve(none, none));
}

TEST_CASE("binned curve conserves the sample and keeps means in [0, 1]") {
  Random rng(97);
  std::vector<double> x(500), y(500);
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = rng.uniform();
    y[k] = rng.bernoulli(x[k]) ? 1.0 : 0.0;
  }
  const auto curve = binned_curve(x, y);
  std::size_t total = 0;
  for (const auto& b : curve.bins) {
    total += b.count;
    if (b.count) {
      CHECK(b.mean >= 0.0);
      CHECK(b.mean <= 1.0);
      CHECK(b.std_error == doctest::Approx(std::sqrt(b.mean * (1 - b.mean) / static_cast<double>(b.count))));
    }
  }
  CHECK(total == x.size());
}

TEST_CASE("constant-probability outcomes give flat bins") {
  Random rng(101);
  std::vector<double> x(20000), y(20000);
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = rng.uniform();
    y[k] = rng.bernoulli(0.3) ? 1.0 : 0.0;
  }
  for (const auto& b : binned_curve(x, y).bins) CHECK(std::abs(b.mean - 0.3) < 4.0 * std::sqrt(0.21 / static_cast<double>(b.count)));
}

TEST_CASE("joint grid") {
  SUBCASE("constant outcome") {
    Random rng(103);
    std::vector<double> x(200), y(200), z(200, 1.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = rng.uniform();
      y[k] = rng.uniform();
    }
    const auto g = joint_grid(x, y, z, 4, 4);
    for (Eigen::Index r = 0; r < 4; ++r)
      for (Eigen::Index c = 0; c < 4; ++c)
        if (g.counts(r, c) > 0) CHECK(g.probability(r, c) == 1.0);
  }
  SUBCASE("outcome depends on the second axis only") {
    Random rng(107);
    std::vector<double> x(2000), y(2000), z(2000);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = rng.uniform();
      y[k] = rng.uniform();
      z[k] = y[k] > 0.5 ? 1.0 : 0.0;
    }
    y.push_back(0.0);
    x.push_back(0.0);
    z.push_back(0.0);
    y.push_back(1.0);
    x.push_back(1.0);
    z.push_back(1.0);
    const auto g = joint_grid(x, y, z, 4, 4);
    for (Eigen::Index r = 0; r < 4; ++r)
      for (Eigen::Index c = 0; c < 4; ++c) CHECK(g.probability(r, c) == (r >= 2 ? 1.0 : 0.0));
  }
  SUBCASE("single observation") {
    const std::vector<double> x{0.5}, y{0.5}, z{1.0};
    const auto g = joint_grid(x, y, z, 3, 3);
    CHECK(g.counts.sum() == 1);
    int occupied = 0;
    for (Eigen::Index r = 0; r < 3; ++r)
      for (Eigen::Index c = 0; c < 3; ++c) occupied += std::isnan(g.probability(r, c)) ? 0 : 1;
    CHECK(occupied == 1);
  }
}

TEST_CASE("two-group anova") {
  const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
  const auto r = anova_two_group(a, b);
  CHECK(r.f == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(r.df_within == 4.0);

  const auto same = anova_two_group(a, a);
  CHECK(same.f == 0.0);
  CHECK(same.p == doctest::Approx(1.0));

  const std::vector<double> flat{2, 2, 2};
  CHECK_THROWS(anova_two_group(flat, flat));
}

TEST_CASE("anova p falls as F grows") {
  const std::vector<double> a{0, 1, 2, 3};
  double last_f = -1.0, last_p = 2.0;
  for (double shift = 0.0; shift < 5.0; shift += 0.5) {
    const std::vector<double> b{shift, shift + 1, shift + 2, shift + 3};
    const auto r = anova_two_group(a, b);
    CHECK(r.f >= last_f);
    CHECK(r.p <= last_p);
    last_f = r.f;
    last_p = r.p;
  }
}

TEST_CASE("pearson r examples") {
  const std::vector<double> x{1, 2, 3};
  CHECK(pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> y{5, 3, 1};
  CHECK(pearson_r(x, y) == doctest::Approx(-1.0).epsilon(1e-15));
  const std::vector<double> z{1, 3, 2};
  CHECK(pearson_r(x, z) == doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<double> c{4, 4, 4};
  CHECK_THROWS(pearson_r(x, c));
}
