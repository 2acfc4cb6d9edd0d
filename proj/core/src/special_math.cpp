#include "binfit/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "binfit/errors.hpp"

namespace binfit {

namespace {

namespace bm = boost::math;

// Return NaN/inf instead of throwing; keep double arithmetic internally.
using Policy = bm::policies::policy<bm::policies::domain_error<bm::policies::errno_on_error>,
                                    bm::policies::pole_error<bm::policies::errno_on_error>,
                                    bm::policies::overflow_error<bm::policies::errno_on_error>,
                                    bm::policies::evaluation_error<bm::policies::errno_on_error>,
                                    bm::policies::promote_double<false>>;

void require_positive(double v, const char* fn, const char* arg) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(fn) + ": " + arg + " must be positive and finite");
  }
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma", "x");
  return bm::lgamma(x, Policy());
}

double stirling_remainder(double z) {
  const double r = 1.0 / z;
  const double r2 = r * r;
  return r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0))));
}

double ln_gamma_ratio(double a, double s) {
  require_positive(a, "ln_gamma_ratio", "a");
  require_positive(a + s, "ln_gamma_ratio", "a + s");
  if (std::min(a, a + s) >= 50.0) {
    // the two ln Γ values nearly cancel; expand around log1p(s / a)
    return s * std::log(a) + (a + s - 0.5) * std::log1p(s / a) - s + stirling_remainder(a + s) -
           stirling_remainder(a);
  }
  return ln_gamma(a + s) - ln_gamma(a);
}

double reg_inc_gamma(double shape, double x) {
  require_positive(shape, "reg_inc_gamma", "shape");
  if (std::isnan(x) || x < 0.0) throw DomainError("reg_inc_gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return bm::gamma_p(shape, x, Policy());
}

double reg_inc_gamma_upper(double shape, double x) {
  require_positive(shape, "reg_inc_gamma_upper", "shape");
  if (std::isnan(x) || x < 0.0) throw DomainError("reg_inc_gamma_upper: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return bm::gamma_q(shape, x, Policy());
}

double reg_inc_beta(double p, double q, double x) {
  require_positive(p, "reg_inc_beta", "p");
  require_positive(q, "reg_inc_beta", "q");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return bm::ibeta(p, q, x, Policy());
}

double reg_inc_beta_upper(double p, double q, double x) {
  require_positive(p, "reg_inc_beta_upper", "p");
  require_positive(q, "reg_inc_beta_upper", "q");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta_upper: x must lie in [0, 1]");
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  return bm::ibetac(p, q, x, Policy());
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double std_normal_log_pdf(double z) {
  constexpr double kLogSqrt2Pi = 0.91893853320467274178;
  return -0.5 * z * z - kLogSqrt2Pi;
}

double std_logistic_cdf(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double std_logistic_sf(double z) { return 1.0 / (1.0 + std::exp(z)); }

double std_logistic_log_pdf(double z) {
  const double a = std::abs(z);
  return -a - 2.0 * std::log1p(std::exp(-a));
}

double normal_raw_moment(int n, double mu, double sigma) {
  if (n < 0) throw DomainError("normal_raw_moment: negative order");
  if (n == 0) return 1.0;
  const double var = sigma * sigma;
  double prev = 1.0;  // m_0
  double cur = mu;    // m_1
  for (int i = 2; i <= n; ++i) {
    const double next = mu * cur + (i - 1) * var * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double logistic_central_moment(int n, double sigma) {
  if (n < 0) throw DomainError("logistic_central_moment: negative order");
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  const int j = n / 2;
  const double b = std::abs(bm::bernoulli_b2n<double>(j));
  // (2^n - 2) pi^n |B_n| sigma^n, assembled in logs to stay in range.
  const double log_mag = std::log(std::ldexp(1.0, n) - 2.0) + n * std::log(std::numbers::pi) +
                         std::log(b) + n * std::log(sigma);
  return std::exp(log_mag);
}

double logistic_raw_moment(int n, double mu, double sigma) {
  if (n < 0) throw DomainError("logistic_raw_moment: negative order");
  double sum = 0.0;
  for (int j = 0; j <= n; j += 2) {
    const double binom = bm::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                          static_cast<unsigned>(j));
    sum += binom * std::pow(mu, n - j) * logistic_central_moment(j, sigma);
  }
  return sum;
}

}  // namespace binfit
