#pragma once

namespace colearn {

/// Standard normal density and distribution.
double normal_pdf(double z);
double normal_cdf(double z);
/// log Phi(z), accurate far into the lower tail.
double log_normal_cdf(double z);
/// phi(z) / Phi(z) without overflow for large negative z.
double inverse_mills_ratio(double z);
/// Inverse of normal_cdf on (0, 1); throws std::domain_error otherwise.
double normal_quantile(double q);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

/// P(F > f) for an F(d1, d2) variable.
double f_survival(double f, double d1, double d2);
/// Two-sided P(|T| > |t|) for Student's t with `df` degrees of freedom.
double t_two_sided_p(double t, double df);
/// Two-sided normal p-value for a z statistic.
double z_two_sided_p(double z);

}  // namespace colearn
