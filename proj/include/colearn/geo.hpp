#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "colearn/metrics.hpp"

namespace colearn {

/// Province x province cosine similarity of ln(RCA + 1) profiles.
struct SimilarityMatrix {
  Matrix values;
};

double industrial_similarity(std::span<const double> rca_i, std::span<const double> rca_j);
SimilarityMatrix similarity_matrix(const RcaMatrix& rca);

/// How other provinces are weighted in the neighbor density.
enum class NeighborWeighting {
  GeoDistance,     // 1 / D
  NeighborHops,    // 1 / B
  AdjacencyRatio,  // adjacent (B == 1) provinces, unweighted share
  AdjacencyCount,  // adjacent (B == 1) active provinces, raw count
};

const char* to_string(NeighborWeighting weighting);
NeighborWeighting parse_weighting(const std::string& text);  // geo | hops | ratio | count

/// Density of active neighboring provinces for (i, a), excluding i itself.
/// Throws NumericalError when an adjacency variant finds no adjacent province.
double density_neighbors(const ActivityMatrix& u, const DistanceTable& dist, std::size_t i, std::size_t a,
                         NeighborWeighting weighting = NeighborWeighting::GeoDistance);
/// All cells; NaN where an adjacency ratio is undefined.
Matrix density_neighbors_matrix(const ActivityMatrix& u, const DistanceTable& dist,
                                NeighborWeighting weighting = NeighborWeighting::GeoDistance);

/// Number of provinces adjacent to i (B == 1).
int adjacent_count(const DistanceTable& dist, std::size_t i);

/// Mean of the defined values among p[i][a][year], p[j][a][year].
std::optional<double> pairwise_productivity(const ProductivityTensor& prod, std::size_t i, std::size_t j,
                                            std::size_t a, int year);

/// Inverse-distance weighted mean of pairwise productivity over j != i; pairs
/// with no defined productivity are dropped and the weights renormalized.
std::optional<double> productivity_density(const ProductivityTensor& prod, const DistanceTable& dist,
                                           std::size_t i, std::size_t a, int year);
/// All cells for one year; NaN where undefined.
Matrix productivity_density_matrix(const ProductivityTensor& prod, const DistanceTable& dist, int year);

/// Unweighted mean of pairwise_productivity over industries where it is defined.
std::optional<double> pair_productivity(const ProductivityTensor& prod, std::size_t i, std::size_t j, int year);

}  // namespace colearn
