#pragma once

namespace binfit {

// ln Γ(x) for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

// ln Γ(z) - [(z - 1/2) ln z - z + ln sqrt(2 pi)], series good for z >= 50.
double stirling_remainder(double z);

// ln Γ(a + s) - ln Γ(a), accurate when a is huge and s is not.
double ln_gamma_ratio(double a, double s);

// Regularized lower incomplete gamma P(shape, x) and its complement Q = 1 - P,
// each computed directly so that neither loses precision in its own tail.
double reg_inc_gamma(double shape, double x);
double reg_inc_gamma_upper(double shape, double x);

// Regularized incomplete beta I_x(p, q) and its complement 1 - I_x(p, q).
double reg_inc_beta(double p, double q, double x);
double reg_inc_beta_upper(double p, double q, double x);

double std_normal_cdf(double z);
double std_normal_sf(double z);  // 1 - Φ(z) without cancellation
double std_normal_log_pdf(double z);

double std_logistic_cdf(double z);
double std_logistic_sf(double z);
double std_logistic_log_pdf(double z);

// E[Z^n] for Z ~ N(mu, sigma), from m_n = mu m_{n-1} + (n-1) sigma^2 m_{n-2}.
double normal_raw_moment(int n, double mu, double sigma);

// E[(Z - mu)^n] for Z ~ Logistic(mu, sigma): zero for odd n, and for even
// n = 2j equal to sigma^n (2^n - 2) pi^n |B_n| with B_n a Bernoulli number.
double logistic_central_moment(int n, double sigma);

// E[Z^n] for Z ~ Logistic(mu, sigma) by binomial expansion over the central
// moments.
double logistic_raw_moment(int n, double mu, double sigma);

}  // namespace binfit
