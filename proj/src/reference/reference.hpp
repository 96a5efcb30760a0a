#pragma once

// Straightforward serial versions of the metric kernels. Used as oracles in
// the tests and as the baseline in the benchmarks.

#include <optional>
#include <vector>

#include "colearn/events.hpp"
#include "colearn/geo.hpp"
#include "colearn/panel.hpp"

namespace colearn::reference {

Matrix rca(const Matrix& counts);
Matrix activity(const Matrix& rca, double threshold = 1.0);
Matrix proximity(const Matrix& counts);
Matrix similarity(const Matrix& rca);

/// NaN for industries with zero total proximity.
Matrix density_related(const Matrix& u, const Matrix& phi, bool include_self = true);
/// NaN where an adjacency ratio has no adjacent province.
Matrix density_neighbors(const Matrix& u, const DistanceTable& dist, NeighborWeighting weighting);
Matrix productivity_density(const ProductivityTensor& prod, const DistanceTable& dist, int year);

/// Checks every cell and base year against the window definitions directly.
std::vector<EventRecord> scan_events(const std::vector<Matrix>& activity, int first_year, int horizon,
                                     bool strict_keep = false);

}  // namespace colearn::reference
