#include <doctest.h>

#include <cmath>

#include "colearn/error.hpp"
#include "colearn/regression.hpp"
#include "colearn/special.hpp"
#include "support.hpp"

using namespace colearn;

namespace {

Eigen::VectorXd outcome_with_share(std::size_t n, std::size_t ones) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < ones; ++k) y(static_cast<Eigen::Index>(k)) = 1.0;
  return y;
}

/// y = 1{b0 + b1 x + e > 0}, x ~ N(0, 1), plus year labels 2000..2004.
DesignMatrix probit_sample(Random& rng, std::size_t n, double b0, double b1, std::vector<int>* years = nullptr) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(n)), y(static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    x(r) = rng.normal();
    y(r) = (b0 + b1 * x(r) + rng.normal() > 0) ? 1.0 : 0.0;
  }
  DesignMatrix d(n);
  d.add_intercept().add_column("x", x).set_outcome(y);
  if (years) {
    years->resize(n);
    for (auto& t : *years) t = static_cast<int>(rng.uniform_int(2000, 2004));
  }
  return d;
}

}  // namespace

TEST_CASE("intercept-only probit recovers the quantile of the share") {
  DesignMatrix half(100);
  half.add_intercept().set_outcome(outcome_with_share(100, 50));
  auto fit = probit_fit(half);
  CHECK(std::abs(fit["intercept"].estimate) <= 1e-10);

  DesignMatrix three_quarters(400);
  three_quarters.add_intercept().set_outcome(outcome_with_share(400, 300));
  fit = probit_fit(three_quarters);
  CHECK(std::abs(fit["intercept"].estimate - normal_quantile(0.75)) <= 1e-8);
  CHECK(std::abs(fit["intercept"].estimate - 0.67449) <= 1e-5);
  CHECK(fit.pseudo_r2 == 0.0);
}

TEST_CASE("probit recovers a known link") {
  Random rng(113);
  const auto fit = probit_fit(probit_sample(rng, 5000, -1.0, 2.0));
  CHECK(std::abs(fit["intercept"].estimate + 1.0) <= 3.0 * fit["intercept"].std_error);
  CHECK(std::abs(fit["x"].estimate - 2.0) <= 3.0 * fit["x"].std_error);
  CHECK(fit.pseudo_r2 > 0.0);
  CHECK(fit.pseudo_r2 < 1.0);
  CHECK(fit.n == 5000);
}

TEST_CASE("probit likelihood never falls across iterations") {
  Random rng(127);
  for (int rep = 0; rep < 10; ++rep) {
    const auto fit = probit_fit(probit_sample(rng, 800, rng.uniform(-1, 1), rng.uniform(-2, 2)));
    for (std::size_t k = 1; k < fit.log_likelihood_trace.size(); ++k)
      CHECK(fit.log_likelihood_trace[k] >= fit.log_likelihood_trace[k - 1]);
  }
}

TEST_CASE("probit gradient agrees with finite differences") {
  Random rng(131);
  const auto d = probit_sample(rng, 300, 0.3, -0.7);
  for (int point = 0; point < 5; ++point) {
    Eigen::VectorXd beta(2);
    beta << rng.uniform(-1, 1), rng.uniform(-1, 1);
    const Eigen::VectorXd g = probit_gradient(d.x(), d.y(), beta);
    for (Eigen::Index k = 0; k < 2; ++k) {
      Eigen::VectorXd up = beta, down = beta;
      up(k) += 1e-6;
      down(k) -= 1e-6;
      const double fd = (probit_log_likelihood(d.x(), d.y(), up) - probit_log_likelihood(d.x(), d.y(), down)) / 2e-6;
      CHECK(std::abs(fd - g(k)) <= 1e-6 * std::max(1.0, std::abs(g(k))));
    }
  }
}

TEST_CASE("year reference choice leaves the slope alone") {
  Random rng(137);
  std::vector<int> years;
  auto base = probit_sample(rng, 2000, -0.5, 1.0, &years);
  DesignMatrix a = base, b = base;
  a.add_year_effects(years, 2000);
  b.add_year_effects(years, 2003);
  const auto fa = probit_fit(a);
  const auto fb = probit_fit(b);
  CHECK(std::abs(fa["x"].estimate - fb["x"].estimate) <= 1e-8);
  CHECK(std::abs(fa.log_likelihood - fb.log_likelihood) <= 1e-8);
}

TEST_CASE("probit error paths") {
  DesignMatrix one_class(10);
  one_class.add_intercept().set_outcome(Eigen::VectorXd::Ones(10));
  CHECK_THROWS_WITH_AS(probit_fit(one_class), doctest::Contains("single class"), NumericalError);

  DesignMatrix dependent(10);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(10, 0, 9);
  dependent.add_intercept().add_column("x", x).add_column("x2", 2.0 * x).set_outcome(outcome_with_share(10, 5));
  CHECK_THROWS_WITH_AS(probit_fit(dependent), doctest::Contains("x2"), NumericalError);

  DesignMatrix separated(10);
  separated.add_intercept().add_column("x", x).set_outcome(
      (x.array() > 4.5).cast<double>().matrix());
  CHECK_THROWS_WITH_AS(probit_fit(separated), doctest::Contains("separation"), NumericalError);
}

TEST_CASE("year dummies with the intercept are rank deficient only without a reference") {
  std::vector<int> years{2000, 2001, 2000, 2001};
  DesignMatrix d(4);
  d.add_intercept().add_year_effects(years);
  CHECK(d.dependent_columns().empty());
  CHECK(d.names().size() == 2);
  d.add_column("year_2000", Eigen::Vector4d(1, 0, 1, 0));
  CHECK(d.dependent_columns() == std::vector<std::string>{"year_2000"});
}

TEST_CASE("ols through two points") {
  DesignMatrix d(2);
  d.add_intercept().add_column("x", Eigen::Vector2d(0, 1)).set_outcome(Eigen::Vector2d(0, 1));
  CHECK_THROWS_AS(ols_fit(d), NumericalError);  // needs n > k

  DesignMatrix e(3);
  e.add_intercept().add_column("x", Eigen::Vector3d(0, 1, 2)).set_outcome(Eigen::Vector3d(0, 1, 2));
  const auto fit = ols_fit(e);
  CHECK(std::abs(fit["intercept"].estimate) <= 1e-14);
  CHECK(std::abs(fit["x"].estimate - 1.0) <= 1e-14);
}

TEST_CASE("ols matches the normal equations and leaves orthogonal residuals") {
  Random rng(139);
  for (int rep = 0; rep < 10; ++rep) {
    DesignMatrix d(50);
    d.add_intercept();
    for (int c = 0; c < 3; ++c) {
      Eigen::VectorXd col(50);
      for (auto& v : col) v = rng.normal();
      d.add_column("x" + std::to_string(c), col);
    }
    Eigen::VectorXd y(50);
    for (auto& v : y) v = rng.normal(1.0, 2.0);
    d.set_outcome(y);
    const auto fit = ols_fit(d);
    const Eigen::VectorXd direct = (d.x().transpose() * d.x()).ldlt().solve(d.x().transpose() * y);
    CHECK((fit.estimates() - direct).cwiseAbs().maxCoeff() <= 1e-10);
    const Eigen::VectorXd resid = y - d.x() * fit.estimates();
    CHECK((d.x().transpose() * resid).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("classical and robust errors agree under homoskedastic noise") {
  Random rng(149);
  DesignMatrix d(20000);
  Eigen::VectorXd x(20000), y(20000);
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    x(r) = rng.normal();
    y(r) = 1.0 + 0.5 * x(r) + rng.normal();
  }
  d.add_intercept().add_column("x", x).set_outcome(y);
  const auto classical = ols_fit(d, Covariance::Classical);
  const auto robust = ols_fit(d, Covariance::Robust);
  CHECK(std::abs(robust["x"].std_error / classical["x"].std_error - 1.0) < 0.05);
  CHECK(classical.r2 > 0.0);
  CHECK(classical.rmse == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("significance stars") {
  CHECK(significance_stars(0.005) == "***");
  CHECK(significance_stars(0.03) == "**");
  CHECK(significance_stars(0.07) == "*");
  CHECK(significance_stars(0.2) == "");
}
