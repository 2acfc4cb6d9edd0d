#pragma once

#include <span>
#include <string>
#include <vector>

#include "binfit/moments.hpp"

namespace binfit {

// Cumulative and survival probability at one bin edge. Both are carried so
// that bins in either tail can be differenced without cancellation.
struct EdgeProbability {
  double cdf = 0.0;
  double sf = 1.0;
};

// Probability of [lo, hi) from the edge probabilities at its ends.
double interval_probability(const EdgeProbability& lo, const EdgeProbability& hi);

// ---------------------------------------------------------------------------
// Extended generalized gamma. With omega = (ln x - mu) / sigma, lambda = 0 is
// the lognormal; otherwise W = lambda^-2 exp(lambda omega) is standard gamma
// with shape lambda^-2.

struct EggParams {
  double mu = 0.0;
  double sigma = 1.0;
  double lambda = 0.0;

  friend bool operator==(const EggParams&, const EggParams&) = default;
};

void check(const EggParams& p);

// The revised linear-in-lambda approximation replaces the lnΓ form once
// lambda^-2 exceeds this value.
inline constexpr double kEggFallbackShape = 1e15;

double egg_cdf(const EggParams& p, double x);
double egg_sf(const EggParams& p, double x);
double egg_pdf(const EggParams& p, double x);
// x in [0, +inf]; 0 and +inf map to the limits.
EdgeProbability egg_edge(const EggParams& p, double x);

// E[X^k]; PlusInfinity when k lambda sigma <= -1.
MomentValue egg_moment(int k, const EggParams& p);

// ---------------------------------------------------------------------------
// Power-normal and power-logistic: t(X) = X^(1/m) for a positive integer m, or
// ln X, is normal (PN) or logistic (PL) with location mu and scale sigma.

enum class PowerFamily { kNormal, kLogistic };

const char* to_string(PowerFamily f);

// The exponent lambda expressed through m = 1 / lambda; m == 0 encodes the
// log transform (lambda = 0).
class PowerExponent {
 public:
  static constexpr PowerExponent log() { return PowerExponent(0); }
  static PowerExponent root(int m);  // throws DomainError for m < 1

  constexpr bool is_log() const { return inverse_ == 0; }
  constexpr int inverse() const { return inverse_; }
  double lambda() const { return is_log() ? 0.0 : 1.0 / inverse_; }
  std::string label() const;  // "log" or "1/m"

  friend constexpr bool operator==(PowerExponent, PowerExponent) = default;

 private:
  constexpr explicit PowerExponent(int inverse) : inverse_(inverse) {}
  int inverse_;
};

struct PowerParams {
  PowerFamily family = PowerFamily::kNormal;
  PowerExponent exponent = PowerExponent::log();
  double mu = 0.0;
  double sigma = 1.0;

  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

void check(const PowerParams& p);

// lambda^-1 = 1..20, 25, 33, 50 and the log case.
std::vector<PowerExponent> pn_exponent_grid();
// lambda^-1 = 1..20, 25, 50 and the log case.
std::vector<PowerExponent> pl_exponent_grid();
std::vector<PowerExponent> default_exponent_grid(PowerFamily f);

// t(x, lambda) on [0, +inf]: ln 0 = -inf, +inf stays +inf.
double power_transform(double x, PowerExponent e);

double power_cdf(const PowerParams& p, double x);
EdgeProbability power_edge(const PowerParams& p, double x);

// E[X^k] = E[Z^(k m)] as a polynomial in (mu, sigma) for root exponents; the
// lognormal and log-logistic moments for the log case. The log-logistic
// moment e^(k mu) k pi sigma / sin(k pi sigma) exists only for k sigma < 1.
MomentValue power_moment(int k, const PowerParams& p);

// Density of the transformed variable Z at z.
double power_latent_pdf(const PowerParams& p, double z);

}  // namespace binfit
