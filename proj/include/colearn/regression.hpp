#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace colearn {

/// Named regressor columns plus an outcome vector.
class DesignMatrix {
 public:
  explicit DesignMatrix(std::size_t rows);

  DesignMatrix& add_intercept();
  DesignMatrix& add_column(std::string name, const Eigen::VectorXd& values);
  /// One dummy per distinct year except the reference year (earliest by default).
  DesignMatrix& add_year_effects(std::span<const int> years, std::optional<int> reference = std::nullopt);
  DesignMatrix& set_outcome(const Eigen::VectorXd& y);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  /// Columns that are linear combinations of earlier columns.
  std::vector<std::string> dependent_columns() const;
  /// Throws NumericalError naming the dependent columns.
  void require_full_rank() const;

 private:
  std::size_t rows_;
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::vector<std::string> names_;
};

enum class ModelKind { Probit, Ols };
enum class Covariance { Classical, Robust };

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double statistic = 0.0;  // z for probit, t for OLS
  double p_value = 1.0;
};

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1.
std::string significance_stars(double p);

struct RegressionResult {
  ModelKind model = ModelKind::Ols;
  Covariance covariance = Covariance::Classical;
  std::vector<Coefficient> coefficients;
  Eigen::MatrixXd covariance_matrix;
  std::size_t n = 0;

  // Probit
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;
  double pseudo_r2 = 0.0;
  int iterations = 0;
  std::vector<double> log_likelihood_trace;

  // OLS
  double r2 = 0.0;
  double rmse = 0.0;

  const Coefficient& operator[](std::string_view name) const;
  Eigen::VectorXd estimates() const;
};

// Probit likelihood pieces, exposed for checking.
double probit_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);
Eigen::VectorXd probit_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);
Eigen::MatrixXd probit_hessian(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

struct ProbitOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 100;
  /// Any |beta| beyond this is treated as perfect separation.
  double divergence_bound = 25.0;
};

/// Damped Newton maximum likelihood from a zero start. Standard errors come
/// from the inverse negative Hessian; pseudo-R2 = 1 - LL / LL0 against an
/// intercept-only fit.
RegressionResult probit_fit(const DesignMatrix& design, const ProbitOptions& options = {});

/// Least squares via Householder QR. Robust covariance is the HC1 sandwich.
RegressionResult ols_fit(const DesignMatrix& design, Covariance covariance = Covariance::Classical);

}  // namespace colearn
