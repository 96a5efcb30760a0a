#include "colearn/geo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "colearn/error.hpp"

namespace colearn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pair_weight(const DistanceTable& dist, std::size_t i, std::size_t j, NeighborWeighting weighting) {
  switch (weighting) {
    case NeighborWeighting::GeoDistance: return 1.0 / dist.geographic(i, j);
    case NeighborWeighting::NeighborHops: return 1.0 / dist.hops(i, j);
    case NeighborWeighting::AdjacencyRatio:
    case NeighborWeighting::AdjacencyCount: return dist.adjacent(i, j) ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

double industrial_similarity(std::span<const double> rca_i, std::span<const double> rca_j) {
  if (rca_i.size() != rca_j.size()) throw std::invalid_argument("industrial_similarity: length mismatch");
  double dot = 0.0, norm_i = 0.0, norm_j = 0.0;
  for (std::size_t a = 0; a < rca_i.size(); ++a) {
    const double yi = std::log1p(rca_i[a]);
    const double yj = std::log1p(rca_j[a]);
    dot += yi * yj;
    norm_i += yi * yi;
    norm_j += yj * yj;
  }
  if (norm_i == 0.0 || norm_j == 0.0) return 0.0;
  return std::min(1.0, dot / (std::sqrt(norm_i) * std::sqrt(norm_j)));
}

SimilarityMatrix similarity_matrix(const RcaMatrix& rca) {
  const Matrix y = rca.values.array().log1p().matrix();
  const auto provinces = y.rows();
  const Eigen::VectorXd norms = y.rowwise().norm();
  SimilarityMatrix sim{Matrix::Zero(provinces, provinces)};
#pragma omp parallel for schedule(dynamic, 2)
  for (Eigen::Index i = 0; i < provinces; ++i) {
    if (norms(i) == 0) continue;
    sim.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < provinces; ++j) {
      if (norms(j) == 0) continue;
      const double v = std::min(1.0, y.row(i).dot(y.row(j)) / (norms(i) * norms(j)));
      sim.values(i, j) = v;
      sim.values(j, i) = v;
    }
  }
  return sim;
}

const char* to_string(NeighborWeighting weighting) {
  switch (weighting) {
    case NeighborWeighting::GeoDistance: return "geo";
    case NeighborWeighting::NeighborHops: return "hops";
    case NeighborWeighting::AdjacencyRatio: return "ratio";
    case NeighborWeighting::AdjacencyCount: return "count";
  }
  return "?";
}

NeighborWeighting parse_weighting(const std::string& text) {
  if (text == "geo") return NeighborWeighting::GeoDistance;
  if (text == "hops") return NeighborWeighting::NeighborHops;
  if (text == "ratio") return NeighborWeighting::AdjacencyRatio;
  if (text == "count") return NeighborWeighting::AdjacencyCount;
  throw std::invalid_argument("unknown density variant '" + text + "' (expected geo, hops, ratio or count)");
}

double density_neighbors(const ActivityMatrix& u, const DistanceTable& dist, std::size_t i, std::size_t a,
                         NeighborWeighting weighting) {
  const auto provinces = u.provinces();
  if (provinces < 2) throw NumericalError("neighbor density needs at least two provinces");
  double numerator = 0.0, denominator = 0.0;
  for (std::size_t j = 0; j < provinces; ++j) {
    if (j == i) continue;
    const double w = pair_weight(dist, i, j, weighting);
    numerator += w * u.values()(j, a);
    denominator += w;
  }
  if (weighting == NeighborWeighting::AdjacencyCount) return numerator;
  if (!(denominator > 0))
    throw NumericalError("province #" + std::to_string(i + 1) + " has no adjacent province");
  return numerator / denominator;
}

Matrix density_neighbors_matrix(const ActivityMatrix& u, const DistanceTable& dist, NeighborWeighting weighting) {
  const auto provinces = static_cast<Eigen::Index>(u.provinces());
  const auto industries = static_cast<Eigen::Index>(u.industries());
  if (provinces < 2) throw NumericalError("neighbor density needs at least two provinces");
  Matrix weights(provinces, provinces);
  for (Eigen::Index i = 0; i < provinces; ++i)
    for (Eigen::Index j = 0; j < provinces; ++j)
      weights(i, j) = i == j ? 0.0 : pair_weight(dist, i, j, weighting);
  // Same summation order for numerator and total keeps the ratio <= 1.
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(provinces);
  for (Eigen::Index i = 0; i < provinces; ++i)
    for (Eigen::Index j = 0; j < provinces; ++j) totals(i) += weights(i, j);

  Matrix omega(provinces, industries);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < provinces; ++i) {
    for (Eigen::Index a = 0; a < industries; ++a) {
      double numerator = 0.0;
      for (Eigen::Index j = 0; j < provinces; ++j) numerator += weights(i, j) * u.values()(j, a);
      if (weighting == NeighborWeighting::AdjacencyCount) {
        omega(i, a) = numerator;
      } else {
        omega(i, a) = totals(i) > 0 ? numerator / totals(i) : kNaN;
      }
    }
  }
  return omega;
}

int adjacent_count(const DistanceTable& dist, std::size_t i) {
  int n = 0;
  for (std::size_t j = 0; j < dist.provinces(); ++j)
    if (dist.adjacent(i, j)) ++n;
  return n;
}

std::optional<double> pairwise_productivity(const ProductivityTensor& prod, std::size_t i, std::size_t j,
                                            std::size_t a, int year) {
  const auto pi = prod.productivity(i, a, year);
  const auto pj = prod.productivity(j, a, year);
  if (pi && pj) return 0.5 * (*pi + *pj);
  if (pi) return pi;
  return pj;
}

std::optional<double> productivity_density(const ProductivityTensor& prod, const DistanceTable& dist,
                                           std::size_t i, std::size_t a, int year) {
  double numerator = 0.0, denominator = 0.0;
  for (std::size_t j = 0; j < prod.provinces(); ++j) {
    if (j == i) continue;
    const auto p = pairwise_productivity(prod, i, j, a, year);
    if (!p) continue;
    const double w = 1.0 / dist.geographic(i, j);
    numerator += w * *p;
    denominator += w;
  }
  if (!(denominator > 0)) return std::nullopt;
  return numerator / denominator;
}

Matrix productivity_density_matrix(const ProductivityTensor& prod, const DistanceTable& dist, int year) {
  const auto provinces = static_cast<Eigen::Index>(prod.provinces());
  const auto industries = static_cast<Eigen::Index>(prod.industries());
  // Cell productivity with NaN for missing, and inverse distances.
  Matrix p(provinces, industries);
  for (Eigen::Index i = 0; i < provinces; ++i)
    for (Eigen::Index a = 0; a < industries; ++a) p(i, a) = prod.productivity(i, a, year).value_or(kNaN);
  Matrix inverse = Matrix::Zero(provinces, provinces);
  for (Eigen::Index i = 0; i < provinces; ++i)
    for (Eigen::Index j = 0; j < provinces; ++j)
      if (i != j) inverse(i, j) = 1.0 / dist.geographic(i, j);

  Matrix zeta(provinces, industries);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < provinces; ++i) {
    for (Eigen::Index a = 0; a < industries; ++a) {
      const double own = p(i, a);
      double numerator = 0.0, denominator = 0.0;
      for (Eigen::Index j = 0; j < provinces; ++j) {
        if (j == i) continue;
        const double other = p(j, a);
        double pair;
        if (std::isnan(own) && std::isnan(other)) continue;
        if (std::isnan(own)) {
          pair = other;
        } else if (std::isnan(other)) {
          pair = own;
        } else {
          pair = 0.5 * (own + other);
        }
        numerator += inverse(i, j) * pair;
        denominator += inverse(i, j);
      }
      zeta(i, a) = denominator > 0 ? numerator / denominator : kNaN;
    }
  }
  return zeta;
}

std::optional<double> pair_productivity(const ProductivityTensor& prod, std::size_t i, std::size_t j, int year) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t a = 0; a < prod.industries(); ++a) {
    if (auto p = pairwise_productivity(prod, i, j, a, year)) {
      sum += *p;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace colearn
