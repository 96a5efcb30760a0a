#include <doctest.h>

#include <cmath>

#include "colearn/error.hpp"
#include "colearn/metrics.hpp"
#include "colearn/space.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace colearn;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

ProximityMatrix phi_of(Matrix m) { return ProximityMatrix{std::move(m)}; }

}  // namespace

TEST_CASE("rca of a diagonal panel") {
  const auto rca = compute_rca(mat({{1, 0}, {0, 1}}));
  CHECK(rca.values == mat({{2, 0}, {0, 2}}));
}

TEST_CASE("uniform counts give rca 1 and full activity") {
  Matrix counts = Matrix::Constant(4, 5, 7.0);
  const auto rca = compute_rca(counts);
  CHECK((rca.values.array() == 1.0).all());
  CHECK((compute_activity(rca).values().array() == 1.0).all());
}

TEST_CASE("single province has rca 1 in every nonzero industry") {
  const auto rca = compute_rca(mat({{3, 0, 8, 1}}));
  CHECK(rca.values == mat({{1, 0, 1, 1}}));
}

TEST_CASE("empty province rows are zero and flagged") {
  const auto rca = compute_rca(mat({{1, 2}, {0, 0}, {3, 1}}));
  CHECK(rca.values.row(1).isZero());
  REQUIRE(rca.empty_provinces.size() == 1);
  CHECK(rca.empty_provinces[0] == 1);
}

TEST_CASE("empty year is an input error") {
  PanelTensor panel(2, 2, {2000, 2001});
  panel.set(0, 0, 2001, 3);
  CHECK_THROWS_WITH_AS(compute_rca(panel, 2000), doctest::Contains("empty year"), InputError);
  CHECK_NOTHROW(compute_rca(panel, 2001));
}

TEST_CASE("activity threshold is inclusive") {
  const auto u = compute_activity(RcaMatrix{mat({{1.0, 0.999, 0.0}, {0.0, 0.0, 0.0}}), {}});
  CHECK(u.values() == mat({{1, 0, 0}, {0, 0, 0}}));
}

TEST_CASE("activity matrices accept only 0/1 indicators") {
  CHECK_THROWS(ActivityMatrix::from_indicators(mat({{0, 0.5}})));
  CHECK_NOTHROW(ActivityMatrix::from_indicators(mat({{0, 1}})));
}

TEST_CASE("proximity examples") {
  SUBCASE("identical columns") {
    const auto phi = compute_proximity(mat({{2, 2}, {5, 5}}));
    CHECK(phi.values(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("disjoint support") {
    const auto phi = compute_proximity(mat({{2, 0}, {0, 5}}));
    CHECK(phi.values(0, 1) == 0.0);
  }
  SUBCASE("one over root two") {
    const auto phi = compute_proximity(mat({{1, 1}, {0, 1}}));
    CHECK(phi.values(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("zero column is unrelated to everything, itself included") {
    const auto phi = compute_proximity(mat({{1, 0, 2}, {3, 0, 1}}));
    CHECK(phi.values.row(1).isZero());
    CHECK(phi.values.col(1).isZero());
    CHECK(phi.values(0, 0) == 1.0);
  }
}

TEST_CASE("proximity is invariant to scaling an industry column") {
  Random rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix counts = testing::random_counts(rng, 6, 7);
    const auto base = compute_proximity(counts);
    counts.col(rep % 7) *= rng.uniform(0.1, 50.0);
    const auto scaled = compute_proximity(counts);
    CHECK((base.values - scaled.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("related density examples") {
  // 3 industries; phi(a, .) = (1, 0.5, 0.25), only the third active.
  const auto phi = phi_of(mat({{1, 0.5, 0.25}, {0.5, 1, 0.1}, {0.25, 0.1, 1}}));
  const auto u = ActivityMatrix::from_indicators(mat({{0, 0, 1}}));
  CHECK(density_related(u, phi, 0, 0) == doctest::Approx(0.25 / 1.75).epsilon(1e-15));

  const auto all = ActivityMatrix::from_indicators(mat({{1, 1, 1}}));
  const auto none = ActivityMatrix::from_indicators(mat({{0, 0, 0}}));
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(density_related(all, phi, 0, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(density_related(none, phi, 0, a) == 0.0);
  }
}

TEST_CASE("self term switch drops the target industry") {
  const auto phi = phi_of(mat({{1, 0.5}, {0.5, 1}}));
  const auto u = ActivityMatrix::from_indicators(mat({{1, 0}}));
  CHECK(density_related(u, phi, 0, 0, SelfTerm::Include) == doctest::Approx(1.0 / 1.5));
  CHECK(density_related(u, phi, 0, 0, SelfTerm::Exclude) == 0.0);
  CHECK(density_related(u, phi, 0, 1, SelfTerm::Exclude) == 1.0);
}

TEST_CASE("isolated industry has no related density") {
  const auto phi = phi_of(mat({{1, 0}, {0, 0}}));
  const auto u = ActivityMatrix::from_indicators(mat({{1, 0}}));
  CHECK_THROWS_WITH_AS(density_related(u, phi, 0, 1), doctest::Contains("isolated industry"), NumericalError);
  CHECK(std::isnan(density_related_matrix(u, phi)(0, 1)));
}

TEST_CASE("related density matches the double loop") {
  Random rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix counts = testing::random_counts(rng, 5, 6, 9, 0.2);
    const auto phi = compute_proximity(counts);
    const auto u = compute_activity(compute_rca(counts));
    const Matrix fast = density_related_matrix(u, phi);
    const Matrix slow = reference::density_related(u.values(), phi.values);
    for (Eigen::Index i = 0; i < fast.rows(); ++i)
      for (Eigen::Index a = 0; a < fast.cols(); ++a) {
        if (std::isnan(slow(i, a))) {
          CHECK(std::isnan(fast(i, a)));
          continue;
        }
        CHECK(std::abs(fast(i, a) - slow(i, a)) <= 1e-12);
        CHECK(std::abs(density_related(u, phi, static_cast<std::size_t>(i), static_cast<std::size_t>(a)) -
                       slow(i, a)) <= 1e-12);
      }
  }
}

TEST_CASE("switching an industry on never lowers related density") {
  Random rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix counts = testing::random_counts(rng, 4, 6, 9, 0.1);
    const auto phi = compute_proximity(counts);
    Matrix ind = testing::random_binary(rng, 4, 6);
    const auto before = density_related_matrix(ActivityMatrix::from_indicators(ind), phi);
    const auto i = static_cast<Eigen::Index>(rng.uniform_int(4));
    const auto b = static_cast<Eigen::Index>(rng.uniform_int(6));
    ind(i, b) = 1.0;
    const auto after = density_related_matrix(ActivityMatrix::from_indicators(ind), phi);
    for (Eigen::Index a = 0; a < 6; ++a)
      if (!std::isnan(before(i, a))) CHECK(after(i, a) >= before(i, a));
  }
}

TEST_CASE("diversity counts") {
  auto dc = diversity_counts(ActivityMatrix::from_indicators(Matrix::Ones(3, 4)));
  CHECK(dc.ubiquity == std::vector<int>{3, 3, 3, 3});
  CHECK(dc.diversity == std::vector<int>{4, 4, 4});
  dc = diversity_counts(ActivityMatrix::from_indicators(Matrix::Zero(3, 4)));
  CHECK(dc.ubiquity == std::vector<int>{0, 0, 0, 0});
  CHECK(dc.diversity == std::vector<int>{0, 0, 0});
  dc = diversity_counts(ActivityMatrix::from_indicators(Matrix::Identity(3, 3)));
  CHECK(dc.ubiquity == std::vector<int>{1, 1, 1});
  CHECK(dc.diversity == std::vector<int>{1, 1, 1});
}

TEST_CASE("related variants over the industry space") {
  // Star: node 0 linked to 1..4; node 5 isolated.
  std::vector<SpaceEdge> edges;
  for (std::size_t b = 1; b <= 4; ++b) edges.push_back({0, b, 0.9, EdgeOrigin::Mst});
  const IndustrySpaceGraph space(std::vector<double>(6, 1.0), edges);

  auto u = ActivityMatrix::from_indicators(mat({{0, 1, 0, 0, 0, 1}}));
  auto v = related_variants(u, space, 0, 0);
  CHECK(v.active == 1);
  CHECK(v.total == 4);
  CHECK(v.ratio() == 0.25);

  u = ActivityMatrix::from_indicators(mat({{0, 1, 1, 1, 1, 0}}));
  CHECK(related_variants(u, space, 0, 0).ratio() == 1.0);

  v = related_variants(u, space, 0, 5);
  CHECK(v.active == 0);
  CHECK(v.total == 0);
  CHECK_THROWS_AS(v.ratio(), NumericalError);
}

TEST_CASE("rca share identity") {
  Random rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix counts = testing::random_counts(rng, 6, 8);
    const auto rca = compute_rca(counts);
    const double total = counts.sum();
    for (Eigen::Index i = 0; i < counts.rows(); ++i) {
      if (counts.row(i).sum() == 0) continue;
      double s = 0.0;
      for (Eigen::Index a = 0; a < counts.cols(); ++a) s += counts.col(a).sum() / total * rca.values(i, a);
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}
