#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "colearn/panel.hpp"
#include "colearn/rng.hpp"

namespace colearn::testing {

inline Matrix random_counts(Random& rng, std::size_t rows, std::size_t cols, int max_count = 9, double zero_share = 0.3) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rng.bernoulli(zero_share) ? 0.0 : static_cast<double>(rng.uniform_int(1, max_count));
  return m;
}

inline Matrix random_binary(Random& rng, std::size_t rows, std::size_t cols, double p = 0.5) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.bernoulli(p) ? 1.0 : 0.0;
  return m;
}

/// Random symmetric distances; every province gets at least one adjacent partner.
inline DistanceTable random_distances(Random& rng, std::size_t n) {
  DistanceTable d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double km = rng.uniform(50.0, 3000.0);
      d.set(DistanceTable::Metric::Geographic, i, j, km);
      d.set(DistanceTable::Metric::Driving, i, j, km * 1.3);
      const double hops = (j == i + 1) ? 1.0 : static_cast<double>(rng.uniform_int(1, static_cast<long long>(n - 1)));
      d.set(DistanceTable::Metric::Hops, i, j, hops);
      d.set(DistanceTable::Metric::TransitTime, i, j, km / 250.0);
      d.set(DistanceTable::Metric::TrainTime, i, j, km / 120.0);
      d.set(DistanceTable::Metric::DriveTime, i, j, km / 80.0);
    }
  return d;
}

inline ProvinceRegistry provinces(std::size_t n) {
  std::vector<Province> v;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = (i < 9 ? "0" : "") + std::to_string(i + 1);
    v.push_back({static_cast<int>(i + 1), "P" + id, "Province " + id});
  }
  return ProvinceRegistry(v);
}

struct BestTree {
  double total = -1.0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (a, b), a < b, in (a, b) order
};

/// Heaviest spanning tree of a complete graph, by enumerating every
/// (n - 1)-edge subset.
inline BestTree best_spanning_tree(const Matrix& w) {
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) edges.push_back({a, b});
  const auto m = edges.size();
  BestTree best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != n - 1) continue;
    std::vector<std::size_t> parent(n);
    for (std::size_t k = 0; k < n; ++k) parent[k] = k;
    auto root = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    bool tree = true;
    double total = 0.0;
    for (std::size_t e = 0; e < m && tree; ++e) {
      if (!(mask >> e & 1)) continue;
      const auto ra = root(edges[e].first), rb = root(edges[e].second);
      if (ra == rb) tree = false;
      parent[ra] = rb;
      total += w(static_cast<Eigen::Index>(edges[e].first), static_cast<Eigen::Index>(edges[e].second));
    }
    if (tree && total > best.total) {
      best.total = total;
      best.edges.clear();
      for (std::size_t e = 0; e < m; ++e)
        if (mask >> e & 1) best.edges.push_back(edges[e]);
    }
  }
  return best;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("colearn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace colearn::testing
