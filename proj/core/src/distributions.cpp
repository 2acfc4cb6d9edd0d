#include "binfit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "binfit/errors.hpp"
#include "binfit/special_math.hpp"

namespace binfit {

double interval_probability(const EdgeProbability& lo, const EdgeProbability& hi) {
  // Difference whichever tail is smaller at the lower edge.
  if (lo.sf < lo.cdf) return lo.sf - hi.sf;
  return hi.cdf - lo.cdf;
}

// ---------------------------------------------------------------------------
// EGG

void check(const EggParams& p) {
  if (!std::isfinite(p.mu) || !(p.sigma > 0.0) || !std::isfinite(p.sigma) ||
      !std::isfinite(p.lambda)) {
    throw DomainError(fmt::format("invalid EGG parameters (mu={}, sigma={}, lambda={})", p.mu,
                                  p.sigma, p.lambda));
  }
}

namespace {

bool egg_is_lognormal(const EggParams& p) {
  return p.lambda == 0.0 || 1.0 / (p.lambda * p.lambda) > kEggFallbackShape;
}

EdgeProbability egg_interior(const EggParams& p, double x) {
  const double omega = (std::log(x) - p.mu) / p.sigma;
  if (egg_is_lognormal(p)) return {std_normal_cdf(omega), std_normal_sf(omega)};
  const double shape = 1.0 / (p.lambda * p.lambda);
  const double log_w = std::log(shape) + p.lambda * omega;
  double lower = 0.0, upper = 1.0;  // P and Q of the gamma variable W
  if (log_w > 709.0) {
    lower = 1.0;
    upper = 0.0;
  } else if (log_w > -745.0) {
    // One evaluation per edge: compute the side that lies below the mean of
    // W and take the other by subtraction, which is then exact to rounding.
    const double w = std::exp(log_w);
    if (w < shape) {
      lower = reg_inc_gamma(shape, w);
      upper = 1.0 - lower;
    } else {
      upper = reg_inc_gamma_upper(shape, w);
      lower = 1.0 - upper;
    }
  }
  // X increases with W when lambda > 0 and decreases with it otherwise.
  return p.lambda > 0.0 ? EdgeProbability{lower, upper} : EdgeProbability{upper, lower};
}

}  // namespace

EdgeProbability egg_edge(const EggParams& p, double x) {
  if (x <= 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  return egg_interior(p, x);
}

double egg_cdf(const EggParams& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("egg_cdf: x must be positive");
  return egg_edge(p, x).cdf;
}

double egg_sf(const EggParams& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("egg_sf: x must be positive");
  return egg_edge(p, x).sf;
}

double egg_pdf(const EggParams& p, double x) {
  check(p);
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const double omega = (std::log(x) - p.mu) / p.sigma;
  const double log_jacobian = -std::log(p.sigma) - std::log(x);
  if (p.lambda == 0.0) return std::exp(std_normal_log_pdf(omega) + log_jacobian);
  // |lambda| / (sigma x) times the standard log-gamma density with shape
  // lambda^-2 evaluated at y = lambda omega + ln lambda^-2.
  const double shape = 1.0 / (p.lambda * p.lambda);
  const double y = p.lambda * omega + std::log(shape);
  const double log_density = shape * y - std::exp(y) - ln_gamma(shape);
  return std::exp(std::log(std::abs(p.lambda)) + log_jacobian + log_density);
}

namespace {

// k s ln(lambda^2) + ln Γ(a + s) - ln Γ(a) with a = lambda^-2 and
// s = k sigma / lambda. For large arguments the two ln Γ terms nearly cancel
// against the first, so that case is rearranged around log1p(s / a).
double egg_log_gamma_ratio(double a, double s) {
  if (std::min(a, a + s) >= 50.0) {
    const double r = s / a;
    return (a + s - 0.5) * std::log1p(r) - s + stirling_remainder(a + s) - stirling_remainder(a);
  }
  return -s * std::log(a) + ln_gamma(a + s) - ln_gamma(a);
}

}  // namespace

MomentValue egg_moment(int k, const EggParams& p) {
  check(p);
  if (k < 1) throw DomainError("egg_moment: order must be >= 1");
  const double kd = k;
  const double lognormal = std::exp(kd * p.mu + 0.5 * kd * kd * p.sigma * p.sigma);
  if (p.lambda == 0.0) return MomentValue::finite(lognormal);
  if (kd * p.lambda * p.sigma <= -1.0) return MomentValue::plus_infinity();

  const double shape = 1.0 / (p.lambda * p.lambda);
  if (shape > kEggFallbackShape) {
    // Near lambda = 0 the first two moments are close to linear in lambda.
    const double slope = k == 1 ? 0.5 : 1.5;
    return MomentValue::finite(lognormal + slope * p.lambda, /*approximate=*/true);
  }
  const double s = kd * p.sigma / p.lambda;
  return MomentValue::finite(std::exp(kd * p.mu + egg_log_gamma_ratio(shape, s)));
}

// ---------------------------------------------------------------------------
// PN / PL

const char* to_string(PowerFamily f) { return f == PowerFamily::kNormal ? "PN" : "PL"; }

PowerExponent PowerExponent::root(int m) {
  if (m < 1) throw DomainError(fmt::format("power exponent: 1/lambda must be >= 1, got {}", m));
  return PowerExponent(m);
}

std::string PowerExponent::label() const {
  return is_log() ? std::string("log") : fmt::format("1/{}", inverse_);
}

void check(const PowerParams& p) {
  if (!std::isfinite(p.mu) || !(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    throw DomainError(fmt::format("invalid {} parameters (mu={}, sigma={})", to_string(p.family),
                                  p.mu, p.sigma));
  }
}

namespace {

std::vector<PowerExponent> roots_then_log(std::initializer_list<int> extra) {
  std::vector<PowerExponent> grid;
  for (int m = 1; m <= 20; ++m) grid.push_back(PowerExponent::root(m));
  for (int m : extra) grid.push_back(PowerExponent::root(m));
  grid.push_back(PowerExponent::log());
  return grid;
}

}  // namespace

std::vector<PowerExponent> pn_exponent_grid() { return roots_then_log({25, 33, 50}); }

std::vector<PowerExponent> pl_exponent_grid() { return roots_then_log({25, 50}); }

std::vector<PowerExponent> default_exponent_grid(PowerFamily f) {
  return f == PowerFamily::kNormal ? pn_exponent_grid() : pl_exponent_grid();
}

double power_transform(double x, PowerExponent e) {
  if (std::isnan(x) || x < 0.0) throw DomainError("power_transform: x must be nonnegative");
  if (std::isinf(x)) return x;
  if (e.is_log()) return x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x);
  if (e.inverse() == 1) return x;
  return std::pow(x, 1.0 / e.inverse());
}

EdgeProbability power_edge(const PowerParams& p, double x) {
  const double t = power_transform(x, p.exponent);
  if (t == -std::numeric_limits<double>::infinity()) return {0.0, 1.0};
  if (t == std::numeric_limits<double>::infinity()) return {1.0, 0.0};
  const double z = (t - p.mu) / p.sigma;
  if (p.family == PowerFamily::kNormal) return {std_normal_cdf(z), std_normal_sf(z)};
  return {std_logistic_cdf(z), std_logistic_sf(z)};
}

double power_cdf(const PowerParams& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("power_cdf: x must be positive");
  return power_edge(p, x).cdf;
}

MomentValue power_moment(int k, const PowerParams& p) {
  check(p);
  if (k < 1) throw DomainError("power_moment: order must be >= 1");
  const double kd = k;
  if (p.exponent.is_log()) {
    if (p.family == PowerFamily::kNormal) {
      return MomentValue::finite(std::exp(kd * p.mu + 0.5 * kd * kd * p.sigma * p.sigma));
    }
    const double ks = kd * p.sigma;
    if (ks >= 1.0) return MomentValue::indeterminate();
    const double angle = std::numbers::pi * ks;
    return MomentValue::finite(std::exp(kd * p.mu) * angle / std::sin(angle));
  }
  const int order = k * p.exponent.inverse();
  const double m = p.family == PowerFamily::kNormal ? normal_raw_moment(order, p.mu, p.sigma)
                                                    : logistic_raw_moment(order, p.mu, p.sigma);
  return MomentValue::finite(m);
}

double power_latent_pdf(const PowerParams& p, double z) {
  const double u = (z - p.mu) / p.sigma;
  const double log_pdf =
      p.family == PowerFamily::kNormal ? std_normal_log_pdf(u) : std_logistic_log_pdf(u);
  return std::exp(log_pdf) / p.sigma;
}

}  // namespace binfit
