#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "colearn/error.hpp"
#include "colearn/geo.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace colearn;

namespace {

/// Province 0 plus neighbors at the given geographic distances; hops all 1
/// unless listed in `far`.
DistanceTable star(std::vector<double> km, std::vector<std::size_t> far = {}) {
  const auto n = km.size() + 1;
  DistanceTable d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = i == 0 ? km[j - 1] : km[i - 1] + km[j - 1];
      for (int m = 0; m < 6; ++m) d.set(static_cast<DistanceTable::Metric>(m), i, j, dist);
      const bool is_far = i == 0 && std::find(far.begin(), far.end(), j) != far.end();
      d.set(DistanceTable::Metric::Hops, i, j, is_far || i > 0 ? 2.0 : 1.0);
    }
  return d;
}

ActivityMatrix column(std::vector<double> active) {
  Matrix m(active.size(), 1);
  for (std::size_t i = 0; i < active.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = active[i];
  return ActivityMatrix::from_indicators(m);
}

}  // namespace

TEST_CASE("industrial similarity examples") {
  const double e1 = std::exp(1.0) - 1.0;
  std::vector<double> a{2.0, 0.5, 1.0};
  CHECK(industrial_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> x{3.0, 0.0}, y{0.0, 3.0};
  CHECK(industrial_similarity(x, y) == 0.0);
  std::vector<double> ri{e1, 0.0}, rj{e1, e1};
  CHECK(industrial_similarity(ri, rj) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  std::vector<double> zero{0.0, 0.0};
  CHECK(industrial_similarity(zero, x) == 0.0);
}

TEST_CASE("similarity is unchanged by permuting industries in both vectors") {
  Random rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> a(8), b(8);
    for (auto& v : a) v = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 4.0);
    for (auto& v : b) v = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 4.0);
    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 7; k > 0; --k) std::swap(perm[k], perm[rng.uniform_int(k + 1)]);
    std::vector<double> pa(8), pb(8);
    for (std::size_t k = 0; k < 8; ++k) {
      pa[k] = a[perm[k]];
      pb[k] = b[perm[k]];
    }
    CHECK(std::abs(industrial_similarity(a, b) - industrial_similarity(pa, pb)) <= 1e-12);
  }
}

TEST_CASE("neighbor density examples") {
  const auto d = star({1.0, 3.0});
  CHECK(density_neighbors(column({0, 1, 1}), d, 0, 0) == 1.0);
  CHECK(density_neighbors(column({1, 0, 0}), d, 0, 0) == 0.0);
  CHECK(density_neighbors(column({0, 1, 0}), d, 0, 0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("neighbor density variants") {
  // Province 0: neighbors 1, 2 adjacent, 3 two hops away.
  const auto d = star({100.0, 200.0, 300.0}, {3});
  const auto u = column({0, 1, 0, 1});
  CHECK(density_neighbors(u, d, 0, 0, NeighborWeighting::AdjacencyRatio) == 0.5);
  CHECK(density_neighbors(u, d, 0, 0, NeighborWeighting::AdjacencyCount) == 1.0);
  CHECK(density_neighbors(u, d, 0, 0, NeighborWeighting::NeighborHops) ==
        doctest::Approx((1.0 + 0.5) / (1.0 + 1.0 + 0.5)).epsilon(1e-15));
  CHECK(adjacent_count(d, 0) == 2);
  // Province 1 is adjacent only to 0.
  CHECK(adjacent_count(d, 1) == 1);
}

TEST_CASE("adjacency ratio needs an adjacent province") {
  const auto d = star({100.0, 200.0}, {1, 2});
  const auto u = column({0, 1, 0});
  CHECK_THROWS_AS(density_neighbors(u, d, 0, 0, NeighborWeighting::AdjacencyRatio), NumericalError);
  CHECK(std::isnan(density_neighbors_matrix(u, d, NeighborWeighting::AdjacencyRatio)(0, 0)));
  CHECK(density_neighbors(u, d, 0, 0, NeighborWeighting::AdjacencyCount) == 0.0);
}

TEST_CASE("uniform distances give the plain share of active provinces") {
  Random rng(43);
  DistanceTable d(7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j)
      for (int m = 0; m < 6; ++m) d.set(static_cast<DistanceTable::Metric>(m), i, j, 1.0);
  const Matrix ind = testing::random_binary(rng, 7, 5);
  const auto omega = density_neighbors_matrix(ActivityMatrix::from_indicators(ind), d);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index a = 0; a < 5; ++a) {
      const double others = ind.col(a).sum() - ind(i, a);
      CHECK(omega(i, a) == doctest::Approx(others / 6.0).epsilon(1e-15));
    }
}

TEST_CASE("scaling every distance leaves the neighbor density unchanged") {
  Random rng(47);
  for (int rep = 0; rep < 20; ++rep) {
    auto d = testing::random_distances(rng, 6);
    const auto u = ActivityMatrix::from_indicators(testing::random_binary(rng, 6, 4));
    const Matrix base = density_neighbors_matrix(u, d);
    const double c = rng.uniform(0.01, 100.0);
    DistanceTable scaled(6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        for (int m = 0; m < 6; ++m) {
          const auto metric = static_cast<DistanceTable::Metric>(m);
          scaled.set(metric, i, j, d.get(metric, i, j) * (metric == DistanceTable::Metric::Hops ? 1.0 : c));
        }
    CHECK((density_neighbors_matrix(u, scaled) - base).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("neighbor density matches the double loop and stays in [0, 1]") {
  Random rng(53);
  for (int rep = 0; rep < 50; ++rep) {
    const auto d = testing::random_distances(rng, 6);
    const auto u = ActivityMatrix::from_indicators(testing::random_binary(rng, 6, 5));
    for (auto w : {NeighborWeighting::GeoDistance, NeighborWeighting::NeighborHops, NeighborWeighting::AdjacencyRatio}) {
      const Matrix fast = density_neighbors_matrix(u, d, w);
      const Matrix slow = reference::density_neighbors(u.values(), d, w);
      CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(fast.minCoeff() >= 0.0);
      CHECK(fast.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("pairwise productivity") {
  ProductivityTensor p(3, 1, {2000, 2000});
  p.set(0, 0, 2000, 1000.0, 10.0);
  p.set(1, 0, 2000, 3000.0, 10.0);
  CHECK(*pairwise_productivity(p, 0, 1, 0, 2000) == 200.0);
  CHECK(*pairwise_productivity(p, 0, 2, 0, 2000) == 100.0);
  ProductivityTensor empty(2, 1, {2000, 2000});
  CHECK_FALSE(pairwise_productivity(empty, 0, 1, 0, 2000).has_value());
}

TEST_CASE("productivity density") {
  const auto d = star({1.0, 1.0});
  SUBCASE("constant pairwise productivity") {
    ProductivityTensor p(3, 1, {2000, 2000});
    for (std::size_t i = 0; i < 3; ++i) p.set(i, 0, 2000, 420.0, 6.0);
    CHECK(*productivity_density(p, d, 0, 0, 2000) == doctest::Approx(70.0).epsilon(1e-15));
  }
  SUBCASE("equal weights average the pairs") {
    ProductivityTensor p(3, 1, {2000, 2000});
    p.set(1, 0, 2000, 100.0, 1.0);
    p.set(2, 0, 2000, 200.0, 1.0);
    CHECK(*productivity_density(p, d, 0, 0, 2000) == doctest::Approx(150.0).epsilon(1e-15));
  }
  SUBCASE("missing pairs are dropped") {
    ProductivityTensor p(3, 1, {2000, 2000});
    p.set(1, 0, 2000, 80.0, 1.0);
    CHECK(*productivity_density(p, d, 0, 0, 2000) == doctest::Approx(80.0).epsilon(1e-15));
  }
  SUBCASE("all pairs missing") {
    ProductivityTensor p(3, 1, {2000, 2000});
    CHECK_FALSE(productivity_density(p, d, 0, 0, 2000).has_value());
    CHECK(std::isnan(productivity_density_matrix(p, d, 2000)(0, 0)));
  }
}

TEST_CASE("productivity density matches the double loop") {
  Random rng(59);
  for (int rep = 0; rep < 30; ++rep) {
    const auto d = testing::random_distances(rng, 6);
    ProductivityTensor p(6, 5, {2000, 2000});
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t a = 0; a < 5; ++a)
        if (!rng.bernoulli(0.3)) p.set(i, a, 2000, rng.uniform(10.0, 1e5), static_cast<double>(rng.uniform_int(1, 50)));
    const Matrix fast = productivity_density_matrix(p, d, 2000);
    const Matrix slow = reference::productivity_density(p, d, 2000);
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index a = 0; a < 5; ++a) {
        if (std::isnan(slow(i, a))) {
          CHECK(std::isnan(fast(i, a)));
        } else {
          CHECK(std::abs(fast(i, a) - slow(i, a)) <= 1e-12 * std::abs(slow(i, a)));
          CHECK(fast(i, a) >= 0.0);
        }
      }
  }
}

TEST_CASE("pair productivity averages industries with a defined value") {
  ProductivityTensor p(2, 3, {2000, 2000});
  p.set(0, 0, 2000, 100.0, 1.0);
  p.set(1, 0, 2000, 300.0, 1.0);
  p.set(1, 1, 2000, 50.0, 1.0);
  CHECK(*pair_productivity(p, 0, 1, 2000) == doctest::Approx((200.0 + 50.0) / 2.0));
}

TEST_CASE("similarity matrix is symmetric, bounded and matches the double loop") {
  Random rng(61);
  for (int rep = 0; rep < 30; ++rep) {
    const auto rca = compute_rca(testing::random_counts(rng, 7, 6));
    const Matrix s = similarity_matrix(rca).values;
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.minCoeff() >= 0.0);
    CHECK(s.maxCoeff() <= 1.0);
    CHECK((s - reference::similarity(rca.values)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
