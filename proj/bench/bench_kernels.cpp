// Serial reference kernels against the OpenMP ones, on synthetic inputs.
// Arguments: provinces, industries.

#include <benchmark/benchmark.h>

#include <map>

#include "colearn/events.hpp"
#include "colearn/geo.hpp"
#include "colearn/metrics.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace colearn;

namespace {

struct Inputs {
  Matrix counts;
  RcaMatrix rca;
  ProximityMatrix phi;
  ActivityMatrix u;
  DistanceTable dist;
  ProductivityTensor prod;
};

Inputs make_inputs(std::size_t p, std::size_t a) {
  Random rng(4242);
  Inputs in{testing::random_counts(rng, p, a, 50, 0.4), {}, {}, {}, testing::random_distances(rng, p), {}};
  in.rca = compute_rca(in.counts);
  in.phi = compute_proximity(in.counts);
  in.u = compute_activity(in.rca);
  in.prod = ProductivityTensor(p, a, {2000, 2000});
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < a; ++k)
      if (in.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) > 0)
        in.prod.set(i, k, 2000, rng.uniform(1e3, 1e6), rng.uniform(1, 100));
  return in;
}

std::vector<Matrix> random_history(std::size_t p, std::size_t a, int years) {
  Random rng(99);
  std::vector<Matrix> h;
  for (int t = 0; t < years; ++t) h.push_back(testing::random_binary(rng, p, a, 0.3));
  return h;
}

#define SIZES ->Args({31, 70})->Args({50, 96})->Args({200, 400})->Unit(benchmark::kMicrosecond)

const Inputs& inputs(const benchmark::State& s) {
  static std::map<std::pair<long, long>, Inputs> cache;
  const auto key = std::make_pair(static_cast<long>(s.range(0)), static_cast<long>(s.range(1)));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, make_inputs(static_cast<std::size_t>(key.first), static_cast<std::size_t>(key.second))).first;
  return it->second;
}

void rca_reference(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(reference::rca(in.counts));
}
void rca_kernel(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(compute_rca(in.counts));
}
void proximity_reference(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(reference::proximity(in.counts));
}
void proximity_kernel(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(compute_proximity(in.counts));
}
void related_reference(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(reference::density_related(in.u.values(), in.phi.values));
}
void related_kernel(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(density_related_matrix(in.u, in.phi));
}
void neighbors_reference(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s)
    benchmark::DoNotOptimize(reference::density_neighbors(in.u.values(), in.dist, NeighborWeighting::GeoDistance));
}
void neighbors_kernel(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(density_neighbors_matrix(in.u, in.dist, NeighborWeighting::GeoDistance));
}
void similarity_reference(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(reference::similarity(in.rca.values));
}
void similarity_kernel(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(similarity_matrix(in.rca));
}
void productivity_reference(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(reference::productivity_density(in.prod, in.dist, 2000));
}
void productivity_kernel(benchmark::State& s) {
  const auto& in = inputs(s);
  for (auto _ : s) benchmark::DoNotOptimize(productivity_density_matrix(in.prod, in.dist, 2000));
}
void events_reference(benchmark::State& s) {
  const auto h = random_history(static_cast<std::size_t>(s.range(0)), static_cast<std::size_t>(s.range(1)), 26);
  for (auto _ : s) benchmark::DoNotOptimize(reference::scan_events(h, 1990, 5));
}
void events_kernel(benchmark::State& s) {
  const auto h = random_history(static_cast<std::size_t>(s.range(0)), static_cast<std::size_t>(s.range(1)), 26);
  std::vector<ActivityMatrix> ms;
  for (const auto& m : h) ms.push_back(ActivityMatrix::from_indicators(m));
  const ActivityPanel panel({1990, 2015}, ms);
  for (auto _ : s) benchmark::DoNotOptimize(detect_events(panel));
}

}  // namespace

BENCHMARK(rca_reference) SIZES;
BENCHMARK(rca_kernel) SIZES;
BENCHMARK(proximity_reference) SIZES;
BENCHMARK(proximity_kernel) SIZES;
BENCHMARK(related_reference) SIZES;
BENCHMARK(related_kernel) SIZES;
BENCHMARK(neighbors_reference) SIZES;
BENCHMARK(neighbors_kernel) SIZES;
BENCHMARK(similarity_reference) SIZES;
BENCHMARK(similarity_kernel) SIZES;
BENCHMARK(productivity_reference) SIZES;
BENCHMARK(productivity_kernel) SIZES;
BENCHMARK(events_reference) SIZES;
BENCHMARK(events_kernel) SIZES;

BENCHMARK_MAIN();
