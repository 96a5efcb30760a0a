#include "colearn/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "colearn/error.hpp"
#include "colearn/space.hpp"

namespace colearn {

ActivityMatrix ActivityMatrix::from_indicators(Matrix indicators) {
  for (Eigen::Index k = 0; k < indicators.size(); ++k) {
    const double v = indicators.data()[k];
    if (v != 0.0 && v != 1.0) throw std::invalid_argument("ActivityMatrix: entries must be 0 or 1");
  }
  return ActivityMatrix(std::move(indicators));
}

RcaMatrix compute_rca(const Matrix& counts) {
  const auto provinces = counts.rows();
  const auto industries = counts.cols();
  const Eigen::VectorXd province_totals = counts.rowwise().sum();
  const Eigen::RowVectorXd industry_totals = counts.colwise().sum();
  const double grand_total = province_totals.sum();
  if (!(grand_total > 0)) throw InputError("empty year");

  RcaMatrix rca{Matrix::Zero(provinces, industries), {}};
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < provinces; ++i) {
    if (province_totals(i) == 0) continue;
    for (Eigen::Index a = 0; a < industries; ++a) {
      if (counts(i, a) == 0) continue;
      rca.values(i, a) = (counts(i, a) / province_totals(i)) / (industry_totals(a) / grand_total);
    }
  }
  for (Eigen::Index i = 0; i < provinces; ++i)
    if (province_totals(i) == 0) rca.empty_provinces.push_back(static_cast<std::size_t>(i));
  return rca;
}

RcaMatrix compute_rca(const PanelTensor& panel, int year) {
  if (!panel.years().contains(year))
    throw InputError("year " + std::to_string(year) + " outside panel range");
  if (panel.total(year) == 0) throw InputError("empty year " + std::to_string(year));
  return compute_rca(panel.slice(year));
}

ActivityMatrix compute_activity(const RcaMatrix& rca, double threshold) {
  Matrix u = (rca.values.array() >= threshold).cast<double>();
  return ActivityMatrix(std::move(u));
}

ProximityMatrix compute_proximity(const Matrix& counts) {
  const auto industries = counts.cols();
  const Eigen::RowVectorXd norms = counts.colwise().norm();
  ProximityMatrix phi{Matrix::Zero(industries, industries)};
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index a = 0; a < industries; ++a) {
    if (norms(a) == 0) continue;
    phi.values(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < industries; ++b) {
      if (norms(b) == 0) continue;
      const double cosine = counts.col(a).dot(counts.col(b)) / (norms(a) * norms(b));
      const double clamped = std::min(1.0, std::max(0.0, cosine));
      phi.values(a, b) = clamped;
      phi.values(b, a) = clamped;
    }
  }
  return phi;
}

ProximityMatrix compute_proximity(const PanelTensor& panel, int year) {
  if (!panel.years().contains(year))
    throw InputError("year " + std::to_string(year) + " outside panel range");
  return compute_proximity(panel.slice(year));
}

double density_related(const ActivityMatrix& u, const ProximityMatrix& phi, std::size_t i, std::size_t a,
                       SelfTerm self) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t b = 0; b < phi.size(); ++b) {
    if (self == SelfTerm::Exclude && b == a) continue;
    numerator += phi.values(a, b) * u.values()(i, b);
    denominator += phi.values(a, b);
  }
  if (!(denominator > 0)) throw NumericalError("isolated industry #" + std::to_string(a + 1));
  return numerator / denominator;
}

Matrix density_related_matrix(const ActivityMatrix& u, const ProximityMatrix& phi, SelfTerm self) {
  const auto provinces = static_cast<Eigen::Index>(u.provinces());
  const auto industries = static_cast<Eigen::Index>(phi.size());
  Matrix weights = phi.values;
  if (self == SelfTerm::Exclude) weights.diagonal().setZero();
  // Same summation order for numerator and total keeps the ratio <= 1.
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(industries);
  for (Eigen::Index a = 0; a < industries; ++a)
    for (Eigen::Index b = 0; b < industries; ++b) totals(a) += weights(a, b);

  Matrix omega(provinces, industries);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < provinces; ++i) {
    for (Eigen::Index a = 0; a < industries; ++a) {
      if (!(totals(a) > 0)) {
        omega(i, a) = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double numerator = 0.0;
      for (Eigen::Index b = 0; b < industries; ++b) numerator += weights(a, b) * u.values()(i, b);
      omega(i, a) = numerator / totals(a);
    }
  }
  return omega;
}

DiversityCounts diversity_counts(const ActivityMatrix& u) {
  DiversityCounts counts;
  const auto& v = u.values();
  for (Eigen::Index a = 0; a < v.cols(); ++a) counts.ubiquity.push_back(static_cast<int>(v.col(a).sum()));
  for (Eigen::Index i = 0; i < v.rows(); ++i) counts.diversity.push_back(static_cast<int>(v.row(i).sum()));
  return counts;
}

double RelatedVariants::ratio() const {
  if (total == 0) throw NumericalError("isolated node has no related industries");
  return static_cast<double>(active) / total;
}

RelatedVariants related_variants(const ActivityMatrix& u, const IndustrySpaceGraph& space, std::size_t i,
                                 std::size_t a) {
  if (a >= space.nodes()) throw std::out_of_range("related_variants: industry not in space graph");
  RelatedVariants out;
  for (const auto b : space.neighbors(a)) {
    ++out.total;
    if (u.active(i, b)) ++out.active;
  }
  return out;
}

}  // namespace colearn
