#include "binfit/comparison.hpp"

#include <cmath>

#include <fmt/format.h>

#include "binfit/errors.hpp"
#include "binfit/special_math.hpp"

namespace binfit {

namespace {

// ln(1 + e^v) without overflow.
double softplus(double v) {
  if (v > 30.0) return v + std::log1p(std::exp(-v));
  return std::log1p(std::exp(v));
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void check(const DagumParams& p) {
  if (!positive_finite(p.a) || !positive_finite(p.b) || !positive_finite(p.p)) {
    throw DomainError(fmt::format("invalid Dagum parameters (a={}, b={}, p={})", p.a, p.b, p.p));
  }
}

void check(const Gb2Params& p) {
  if (!std::isfinite(p.a) || p.a == 0.0 || !positive_finite(p.b) || !positive_finite(p.p) ||
      !positive_finite(p.q)) {
    throw DomainError(
        fmt::format("invalid GB2 parameters (a={}, b={}, p={}, q={})", p.a, p.b, p.p, p.q));
  }
}

EdgeProbability dagum_edge(const DagumParams& p, double x) {
  if (x <= 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  // ln F = -p ln(1 + (x/b)^-a)
  const double log_cdf = -p.p * softplus(-p.a * std::log(x / p.b));
  return {std::exp(log_cdf), -std::expm1(log_cdf)};
}

double dagum_cdf(const DagumParams& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("dagum_cdf: x must be positive");
  return dagum_edge(p, x).cdf;
}

double dagum_pdf(const DagumParams& p, double x) {
  check(p);
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const double y = std::log(x / p.b);
  const double log_f = std::log(p.a) + std::log(p.p) + p.a * p.p * y - std::log(x) -
                       (p.p + 1.0) * softplus(p.a * y);
  return std::exp(log_f);
}

MomentValue dagum_moment(int k, const DagumParams& p) {
  check(p);
  if (k < 1) throw DomainError("dagum_moment: order must be >= 1");
  const double r = k / p.a;
  if (!(r < 1.0)) return MomentValue::indeterminate();
  return MomentValue::finite(
      std::exp(k * std::log(p.b) + ln_gamma(1.0 - r) + ln_gamma_ratio(p.p, r)));
}

EdgeProbability gb2_edge(const Gb2Params& p, double x) {
  if (x <= 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  // u = (x/b)^a / (1 + (x/b)^a); both u and 1 - u are formed directly.
  const double v = p.a * std::log(x / p.b);
  const double u = std_logistic_cdf(v);
  const double w = std_logistic_sf(v);
  // I_u(p, q) and its complement. Only the side below the beta mean is
  // evaluated; the reflected form I_u(p, q) = 1 - I_{1-u}(q, p) keeps the
  // argument exact when u is close to 1.
  double lower, upper;
  if (u * (p.p + p.q) < p.p) {
    lower = u <= 0.5 ? reg_inc_beta(p.p, p.q, u) : reg_inc_beta_upper(p.q, p.p, w);
    upper = 1.0 - lower;
  } else {
    upper = u <= 0.5 ? reg_inc_beta_upper(p.p, p.q, u) : reg_inc_beta(p.q, p.p, w);
    lower = 1.0 - upper;
  }
  return p.a > 0.0 ? EdgeProbability{lower, upper} : EdgeProbability{upper, lower};
}

double gb2_cdf(const Gb2Params& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("gb2_cdf: x must be positive");
  return gb2_edge(p, x).cdf;
}

double gb2_pdf(const Gb2Params& p, double x) {
  check(p);
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const double y = std::log(x / p.b);
  const double log_beta = ln_gamma(p.p) + ln_gamma(p.q) - ln_gamma(p.p + p.q);
  const double log_f = std::log(std::abs(p.a)) + p.a * p.p * y - std::log(x) - log_beta -
                       (p.p + p.q) * softplus(p.a * y);
  return std::exp(log_f);
}

MomentValue gb2_moment(int k, const Gb2Params& p) {
  check(p);
  if (k < 1) throw DomainError("gb2_moment: order must be >= 1");
  const double r = k / p.a;
  if (!(p.p + r > 0.0) || !(p.q - r > 0.0)) return MomentValue::indeterminate();
  return MomentValue::finite(
      std::exp(k * std::log(p.b) + ln_gamma_ratio(p.p, r) + ln_gamma_ratio(p.q, -r)));
}

}  // namespace binfit
