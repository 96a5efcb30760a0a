#pragma once

#include <cstddef>
#include <vector>

#include "colearn/panel.hpp"

namespace colearn {

class IndustrySpaceGraph;

/// Revealed comparative advantage for one year, provinces x industries.
struct RcaMatrix {
  Matrix values;
  /// Provinces with no firms in the year; their rows are all zero.
  std::vector<std::size_t> empty_provinces;
};

/// Binary presence matrix derived from RCA. Only compute_activity and
/// from_indicators construct it, so entries are always exactly 0 or 1.
class ActivityMatrix {
 public:
  ActivityMatrix() = default;
  /// Validates that every entry is 0 or 1.
  static ActivityMatrix from_indicators(Matrix indicators);

  const Matrix& values() const { return values_; }
  std::size_t provinces() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t industries() const { return static_cast<std::size_t>(values_.cols()); }
  bool active(std::size_t i, std::size_t a) const { return values_(i, a) != 0.0; }

 private:
  friend ActivityMatrix compute_activity(const RcaMatrix&, double);
  explicit ActivityMatrix(Matrix values) : values_(std::move(values)) {}
  Matrix values_;
};

/// Industry x industry cosine co-location proximity, symmetric, in [0, 1].
struct ProximityMatrix {
  Matrix values;
  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

/// Ubiquity M[industry] and diversity N[province].
struct DiversityCounts {
  std::vector<int> ubiquity;
  std::vector<int> diversity;
};

enum class SelfTerm { Include, Exclude };

RcaMatrix compute_rca(const Matrix& counts);
/// Throws InputError("empty year") when the year's slice has no firms.
RcaMatrix compute_rca(const PanelTensor& panel, int year);

ActivityMatrix compute_activity(const RcaMatrix& rca, double threshold = 1.0);

ProximityMatrix compute_proximity(const Matrix& counts);
ProximityMatrix compute_proximity(const PanelTensor& panel, int year);

/// Proximity-weighted share of industries active in province i, scored for
/// industry a. Throws NumericalError when a has zero total proximity.
double density_related(const ActivityMatrix& u, const ProximityMatrix& phi, std::size_t i, std::size_t a,
                       SelfTerm self = SelfTerm::Include);
/// All (i, a) cells; columns of isolated industries are NaN.
Matrix density_related_matrix(const ActivityMatrix& u, const ProximityMatrix& phi,
                              SelfTerm self = SelfTerm::Include);

DiversityCounts diversity_counts(const ActivityMatrix& u);

/// Related-industry ratio and counts over the industry-space neighborhood.
struct RelatedVariants {
  int active = 0;
  int total = 0;
  /// active / total; throws NumericalError for an isolated node.
  double ratio() const;
};

RelatedVariants related_variants(const ActivityMatrix& u, const IndustrySpaceGraph& space, std::size_t i,
                                 std::size_t a);

}  // namespace colearn
