#include "reference.hpp"

#include <cmath>
#include <limits>

namespace colearn::reference {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cosine(const std::vector<double>& x, const std::vector<double>& y) {
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    dot += x[k] * y[k];
    xx += x[k] * x[k];
    yy += y[k] * y[k];
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return dot / (std::sqrt(xx) * std::sqrt(yy));
}

double weight(const DistanceTable& dist, std::size_t i, std::size_t j, NeighborWeighting weighting) {
  switch (weighting) {
    case NeighborWeighting::GeoDistance: return 1.0 / dist.geographic(i, j);
    case NeighborWeighting::NeighborHops: return 1.0 / dist.hops(i, j);
    default: return dist.hops(i, j) == 1.0 ? 1.0 : 0.0;
  }
}

}  // namespace

Matrix rca(const Matrix& counts) {
  const auto P = counts.rows(), I = counts.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < P; ++i)
    for (Eigen::Index a = 0; a < I; ++a) total += counts(i, a);
  Matrix out = Matrix::Zero(P, I);
  for (Eigen::Index i = 0; i < P; ++i) {
    double row = 0.0;
    for (Eigen::Index a = 0; a < I; ++a) row += counts(i, a);
    for (Eigen::Index a = 0; a < I; ++a) {
      double col = 0.0;
      for (Eigen::Index j = 0; j < P; ++j) col += counts(j, a);
      if (counts(i, a) > 0) out(i, a) = (counts(i, a) / row) / (col / total);
    }
  }
  return out;
}

Matrix activity(const Matrix& rca, double threshold) {
  Matrix out(rca.rows(), rca.cols());
  for (Eigen::Index i = 0; i < rca.rows(); ++i)
    for (Eigen::Index a = 0; a < rca.cols(); ++a) out(i, a) = rca(i, a) >= threshold ? 1.0 : 0.0;
  return out;
}

Matrix proximity(const Matrix& counts) {
  const auto P = counts.rows(), I = counts.cols();
  Matrix out = Matrix::Zero(I, I);
  for (Eigen::Index a = 0; a < I; ++a)
    for (Eigen::Index b = 0; b < I; ++b) {
      std::vector<double> x(P), y(P);
      for (Eigen::Index i = 0; i < P; ++i) {
        x[i] = counts(i, a);
        y[i] = counts(i, b);
      }
      double nx = 0.0, ny = 0.0;
      for (Eigen::Index i = 0; i < P; ++i) {
        nx += x[i] * x[i];
        ny += y[i] * y[i];
      }
      if (nx == 0.0 || ny == 0.0) continue;
      out(a, b) = a == b ? 1.0 : std::min(1.0, std::max(0.0, cosine(x, y)));
    }
  return out;
}

Matrix similarity(const Matrix& rca) {
  const auto P = rca.rows(), I = rca.cols();
  Matrix out = Matrix::Zero(P, P);
  for (Eigen::Index i = 0; i < P; ++i)
    for (Eigen::Index j = 0; j < P; ++j) {
      std::vector<double> x(I), y(I);
      bool any_x = false, any_y = false;
      for (Eigen::Index a = 0; a < I; ++a) {
        x[a] = std::log(rca(i, a) + 1.0);
        y[a] = std::log(rca(j, a) + 1.0);
        any_x = any_x || x[a] != 0.0;
        any_y = any_y || y[a] != 0.0;
      }
      if (!any_x || !any_y) continue;
      out(i, j) = i == j ? 1.0 : std::min(1.0, cosine(x, y));
    }
  return out;
}

Matrix density_related(const Matrix& u, const Matrix& phi, bool include_self) {
  const auto P = u.rows(), I = u.cols();
  Matrix out(P, I);
  for (Eigen::Index i = 0; i < P; ++i)
    for (Eigen::Index a = 0; a < I; ++a) {
      double num = 0.0, den = 0.0;
      for (Eigen::Index b = 0; b < I; ++b) {
        if (!include_self && b == a) continue;
        num += phi(a, b) * u(i, b);
        den += phi(a, b);
      }
      out(i, a) = den > 0 ? num / den : kNaN;
    }
  return out;
}

Matrix density_neighbors(const Matrix& u, const DistanceTable& dist, NeighborWeighting weighting) {
  const auto P = u.rows(), I = u.cols();
  Matrix out(P, I);
  for (Eigen::Index i = 0; i < P; ++i)
    for (Eigen::Index a = 0; a < I; ++a) {
      double num = 0.0, den = 0.0;
      for (Eigen::Index j = 0; j < P; ++j) {
        if (j == i) continue;
        const double w = weight(dist, static_cast<std::size_t>(i), static_cast<std::size_t>(j), weighting);
        num += w * u(j, a);
        den += w;
      }
      if (weighting == NeighborWeighting::AdjacencyCount)
        out(i, a) = num;
      else
        out(i, a) = den > 0 ? num / den : kNaN;
    }
  return out;
}

Matrix productivity_density(const ProductivityTensor& prod, const DistanceTable& dist, int year) {
  const auto P = prod.provinces(), I = prod.industries();
  Matrix out(P, I);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t a = 0; a < I; ++a) {
      double num = 0.0, den = 0.0;
      const auto own = prod.productivity(i, a, year);
      for (std::size_t j = 0; j < P; ++j) {
        if (j == i) continue;
        const auto other = prod.productivity(j, a, year);
        double pair;
        if (own && other)
          pair = (*own + *other) / 2.0;
        else if (own)
          pair = *own;
        else if (other)
          pair = *other;
        else
          continue;
        num += pair / dist.geographic(i, j);
        den += 1.0 / dist.geographic(i, j);
      }
      out(i, a) = den > 0 ? num / den : kNaN;
    }
  return out;
}

std::vector<EventRecord> scan_events(const std::vector<Matrix>& activity, int first_year, int horizon,
                                     bool strict_keep) {
  std::vector<EventRecord> out;
  if (activity.empty()) return out;
  const int T = static_cast<int>(activity.size());
  const auto P = static_cast<std::size_t>(activity[0].rows());
  const auto I = static_cast<std::size_t>(activity[0].cols());
  auto at = [&](int k, std::size_t i, std::size_t a) { return activity[static_cast<std::size_t>(k)](i, a) == 1.0; };
  for (int k = 0; k < T; ++k) {
    if (k - 2 < 0 || k + horizon + 2 >= T) continue;
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t a = 0; a < I; ++a) {
        bool all_after = true;
        for (int d = 0; d <= 2; ++d) all_after = all_after && at(k + horizon + d, i, a);
        bool none_before = true;
        for (int d = 0; d <= 2; ++d) none_before = none_before && !at(k - d, i, a);
        EventRecord r;
        r.province = i;
        r.industry = a;
        r.base_year = first_year + k;
        r.horizon = horizon;
        if (none_before) {
          r.entry_candidate = true;
          r.realized = all_after;
          out.push_back(r);
        } else if (at(k, i, a)) {
          r.entry_candidate = false;
          r.realized = strict_keep ? all_after : at(k + horizon, i, a);
          out.push_back(r);
        }
      }
  }
  return out;
}

}  // namespace colearn::reference
