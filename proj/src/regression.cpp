#include "colearn/regression.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "colearn/error.hpp"
#include "colearn/special.hpp"

namespace colearn {

DesignMatrix::DesignMatrix(std::size_t rows) : rows_(rows), x_(rows, 0), y_(Eigen::VectorXd::Zero(rows)) {}

DesignMatrix& DesignMatrix::add_intercept() { return add_column("intercept", Eigen::VectorXd::Ones(rows_)); }

DesignMatrix& DesignMatrix::add_column(std::string name, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != rows_)
    throw std::invalid_argument("DesignMatrix: column '" + name + "' has wrong length");
  if (find(name)) throw std::invalid_argument("DesignMatrix: duplicate column '" + name + "'");
  x_.conservativeResize(Eigen::NoChange, x_.cols() + 1);
  x_.col(x_.cols() - 1) = values;
  names_.push_back(std::move(name));
  return *this;
}

DesignMatrix& DesignMatrix::add_year_effects(std::span<const int> years, std::optional<int> reference) {
  if (years.size() != rows_) throw std::invalid_argument("DesignMatrix: year vector has wrong length");
  const std::set<int> distinct(years.begin(), years.end());
  if (distinct.empty()) return *this;
  const int ref = reference.value_or(*distinct.begin());
  if (!distinct.count(ref)) throw std::invalid_argument("DesignMatrix: reference year absent from data");
  for (int year : distinct) {
    if (year == ref) continue;
    Eigen::VectorXd dummy(rows_);
    for (std::size_t r = 0; r < rows_; ++r) dummy(r) = years[r] == year ? 1.0 : 0.0;
    add_column("year_" + std::to_string(year), dummy);
  }
  return *this;
}

DesignMatrix& DesignMatrix::set_outcome(const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != rows_) throw std::invalid_argument("DesignMatrix: outcome has wrong length");
  y_ = y;
  return *this;
}

std::optional<std::size_t> DesignMatrix::find(std::string_view name) const {
  for (std::size_t c = 0; c < names_.size(); ++c)
    if (names_[c] == name) return c;
  return std::nullopt;
}

std::vector<std::string> DesignMatrix::dependent_columns() const {
  std::vector<std::string> dependent;
  Eigen::MatrixXd accepted(rows_, 0);
  for (Eigen::Index c = 0; c < x_.cols(); ++c) {
    const Eigen::VectorXd col = x_.col(c);
    const double norm = col.norm();
    bool independent = norm > 0;
    if (independent && accepted.cols() > 0) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(accepted);
      const Eigen::VectorXd coef = qr.solve(col);
      const double residual = (col - accepted * coef).norm();
      independent = residual > 1e-9 * norm;
    }
    if (independent) {
      accepted.conservativeResize(Eigen::NoChange, accepted.cols() + 1);
      accepted.col(accepted.cols() - 1) = col;
    } else {
      dependent.push_back(names_[c]);
    }
  }
  return dependent;
}

void DesignMatrix::require_full_rank() const {
  if (cols() == 0) throw NumericalError("design has no columns");
  const auto dependent = dependent_columns();
  if (dependent.empty()) return;
  std::string list;
  for (const auto& name : dependent) list += (list.empty() ? "" : ", ") + name;
  throw NumericalError("rank-deficient design; dependent columns: " + list);
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

const Coefficient& RegressionResult::operator[](std::string_view name) const {
  for (const auto& c : coefficients)
    if (c.name == name) return c;
  throw std::out_of_range("no coefficient named '" + std::string(name) + "'");
}

Eigen::VectorXd RegressionResult::estimates() const {
  Eigen::VectorXd b(coefficients.size());
  for (std::size_t k = 0; k < coefficients.size(); ++k) b(k) = coefficients[k].estimate;
  return b;
}

// ---------------------------------------------------------------------------
// Probit

double probit_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  double ll = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double q = y(r) > 0.5 ? 1.0 : -1.0;
    ll += log_normal_cdf(q * eta(r));
  }
  return ll;
}

Eigen::VectorXd probit_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd score(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double q = y(r) > 0.5 ? 1.0 : -1.0;
    score(r) = q * inverse_mills_ratio(q * eta(r));
  }
  return x.transpose() * score;
}

Eigen::MatrixXd probit_hessian(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd weight(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double q = y(r) > 0.5 ? 1.0 : -1.0;
    const double lambda = inverse_mills_ratio(q * eta(r));
    weight(r) = lambda * (lambda + q * eta(r));
  }
  return -(x.transpose() * weight.asDiagonal() * x);
}

namespace {

struct ProbitEstimate {
  Eigen::VectorXd beta;
  double log_likelihood = 0.0;
  int iterations = 0;
  std::vector<double> trace;
};

ProbitEstimate newton_probit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ProbitOptions& options) {
  ProbitEstimate est;
  est.beta = Eigen::VectorXd::Zero(x.cols());
  est.log_likelihood = probit_log_likelihood(x, y, est.beta);
  est.trace.push_back(est.log_likelihood);

  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd gradient = probit_gradient(x, y, est.beta);
    if (gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) break;
    if (iter >= options.max_iterations)
      throw NumericalError("probit did not converge in " + std::to_string(options.max_iterations) + " iterations");

    const Eigen::MatrixXd information = -probit_hessian(x, y, est.beta);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(information);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw NumericalError("probit information matrix is not positive definite");
    Eigen::VectorXd step = ldlt.solve(gradient);
    // Predicted gain below the resolution of the likelihood: take the last
    // step if it does not hurt, then stop.
    if (0.5 * gradient.dot(step) < 1e-13 * (1.0 + std::abs(est.log_likelihood))) {
      const Eigen::VectorXd candidate = est.beta + step;
      const double ll = probit_log_likelihood(x, y, candidate);
      if (ll >= est.log_likelihood) {
        est.beta = candidate;
        est.log_likelihood = ll;
        ++est.iterations;
        est.trace.push_back(ll);
      }
      break;
    }

    // Halve the step until the likelihood does not decrease.
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Eigen::VectorXd candidate = est.beta + step;
      const double ll = probit_log_likelihood(x, y, candidate);
      if (ll >= est.log_likelihood) {
        est.beta = candidate;
        est.log_likelihood = ll;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    ++est.iterations;
    est.trace.push_back(est.log_likelihood);
    if (est.beta.lpNorm<Eigen::Infinity>() > options.divergence_bound)
      throw NumericalError("probit coefficients diverge (perfect separation)");
    if (!improved) {
      // No ascent direction left at machine precision.
      if (probit_gradient(x, y, est.beta).lpNorm<Eigen::Infinity>() < std::sqrt(options.gradient_tolerance)) break;
      throw NumericalError("probit line search failed");
    }
  }
  return est;
}

}  // namespace

RegressionResult probit_fit(const DesignMatrix& design, const ProbitOptions& options) {
  const auto& y = design.y();
  const auto n = design.rows();
  if (n == 0) throw NumericalError("probit: no observations");
  double ones = 0.0;
  for (Eigen::Index r = 0; r < y.size(); ++r) {
    if (y(r) != 0.0 && y(r) != 1.0) throw std::invalid_argument("probit: outcome must be 0/1");
    ones += y(r);
  }
  if (ones == 0.0 || ones == static_cast<double>(n)) throw NumericalError("probit: outcome has a single class");
  design.require_full_rank();

  const auto fit = newton_probit(design.x(), y, options);
  const auto null_fit = newton_probit(Eigen::MatrixXd::Ones(n, 1), y, options);

  RegressionResult result;
  result.model = ModelKind::Probit;
  result.covariance = Covariance::Classical;
  result.n = n;
  result.log_likelihood = fit.log_likelihood;
  result.null_log_likelihood = null_fit.log_likelihood;
  result.pseudo_r2 = 1.0 - fit.log_likelihood / null_fit.log_likelihood;
  result.iterations = fit.iterations;
  result.log_likelihood_trace = fit.trace;

  const Eigen::MatrixXd information = -probit_hessian(design.x(), y, fit.beta);
  result.covariance_matrix = information.ldlt().solve(Eigen::MatrixXd::Identity(design.cols(), design.cols()));
  for (std::size_t k = 0; k < design.cols(); ++k) {
    Coefficient c;
    c.name = design.names()[k];
    c.estimate = fit.beta(k);
    c.std_error = std::sqrt(result.covariance_matrix(k, k));
    c.statistic = c.estimate / c.std_error;
    c.p_value = z_two_sided_p(c.statistic);
    result.coefficients.push_back(std::move(c));
  }
  return result;
}

// ---------------------------------------------------------------------------
// OLS

RegressionResult ols_fit(const DesignMatrix& design, Covariance covariance) {
  const auto n = design.rows();
  const auto k = design.cols();
  if (n <= k) throw NumericalError("ols: need more observations than columns");
  design.require_full_rank();
  const auto& x = design.x();
  const auto& y = design.y();

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd residuals = y - x * beta;
  const double rss = residuals.squaredNorm();
  const double df = static_cast<double>(n - k);

  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();

  RegressionResult result;
  result.model = ModelKind::Ols;
  result.covariance = covariance;
  result.n = n;
  if (covariance == Covariance::Classical) {
    result.covariance_matrix = (rss / df) * xtx_inv;
  } else {
    const Eigen::MatrixXd meat = x.transpose() * residuals.array().square().matrix().asDiagonal() * x;
    result.covariance_matrix = (static_cast<double>(n) / df) * xtx_inv * meat * xtx_inv;
  }
  const double mean_y = y.mean();
  const double tss = (y.array() - mean_y).square().sum();
  result.r2 = tss > 0 ? 1.0 - rss / tss : 0.0;
  result.rmse = std::sqrt(rss / df);

  for (std::size_t c = 0; c < k; ++c) {
    Coefficient coef;
    coef.name = design.names()[c];
    coef.estimate = beta(c);
    coef.std_error = std::sqrt(std::max(0.0, result.covariance_matrix(c, c)));
    coef.statistic = coef.std_error > 0 ? coef.estimate / coef.std_error : 0.0;
    coef.p_value = coef.std_error > 0 ? t_two_sided_p(coef.statistic, df) : 1.0;
    result.coefficients.push_back(std::move(coef));
  }
  return result;
}

}  // namespace colearn
