#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "binfit/binned_data.hpp"
#include "binfit/comparison.hpp"
#include "binfit/distributions.hpp"
#include "binfit/moments.hpp"

namespace binfit {

enum class Family { kEgg, kPn, kPl, kDagum, kGb2 };

const char* to_string(Family f);

enum class FitFlag : unsigned {
  kConvergenceWarning = 1u << 0,
  kConvergenceFailure = 1u << 1,
  kMomentFallbackUsed = 1u << 2,
  kEndpointSubstituted = 1u << 3,
  kVarianceClamped = 1u << 4,
};

class FitFlags {
 public:
  FitFlags() = default;
  FitFlags(FitFlag f) : bits_(static_cast<unsigned>(f)) {}  // NOLINT(implicit)

  bool has(FitFlag f) const { return (bits_ & static_cast<unsigned>(f)) != 0; }
  void set(FitFlag f) { bits_ |= static_cast<unsigned>(f); }
  bool empty() const { return bits_ == 0; }
  // Flag names joined with '|', or "" when empty.
  std::string to_string() const;

  friend bool operator==(FitFlags, FitFlags) = default;

 private:
  unsigned bits_ = 0;
};

using FamilyParams = std::variant<EggParams, PowerParams, DagumParams, Gb2Params>;

// One exponent of a PN/PL likelihood profile.
struct ProfilePoint {
  PowerExponent exponent = PowerExponent::log();
  double mu = 0.0;
  double sigma = 0.0;
  double loglik = -INFINITY;
  // Excluded from selection because its variance is not finite.
  bool excluded = false;
};

struct FitResult {
  Family family = Family::kEgg;
  FamilyParams params;
  double loglik = -INFINITY;
  MomentSummary moments;
  FitFlags flags;
  int evaluations = 0;
  std::vector<ProfilePoint> profile;  // PN/PL only
};

struct FitConfig {
  int max_iterations = 2000;
  double param_tol = 1e-8;
  double loglik_tol = 1e-8;
  int restarts = 3;
  std::optional<std::vector<PowerExponent>> pn_grid;
  std::optional<std::vector<PowerExponent>> pl_grid;
  double top_bin_factor = 1.5;
  std::uint64_t seed = 0;
  EligibilityRule eligibility;
};

void check(const FitConfig& config);

// ---------------------------------------------------------------------------
// Likelihood

// Σ_b n_b ln(F(M_b) - F(m_b)) for a contiguous sample, with `edge` giving the
// distribution's cumulative and survival probabilities at a bin edge
// (including 0 and +inf). -inf when an occupied bin has zero probability.
template <class EdgeFn>
  requires std::invocable<EdgeFn&, double>
double binned_loglik(const BinnedSample& sample, EdgeFn&& edge) {
  if (sample.bins.empty()) return 0.0;
  double total = 0.0;
  EdgeProbability lo = edge(sample.bins.front().lower);
  for (const Bin& b : sample.bins) {
    const EdgeProbability hi = edge(b.upper);
    if (b.count > 0) {
      const double prob = interval_probability(lo, hi);
      if (!(prob > 0.0)) return -INFINITY;
      total += static_cast<double>(b.count) * std::log(prob);
    }
    lo = hi;
  }
  return total;
}

double binned_loglik(const BinnedSample& sample, const FamilyParams& params);

// Replaces a lower bound of 0 on the first bin by `value`.
BinnedSample substitute_zero_endpoint(BinnedSample sample, double value = 0.5);

// ---------------------------------------------------------------------------
// Fitting. Every fit validates the sample and throws IneligibleSample when it
// fails config.eligibility. Estimates are returned even when the optimizer
// does not converge; the flags record how it ended.

FitResult fit_egg(const BinnedSample& sample, const FitConfig& config = {});

// EGG with lambda held at 0 (the lognormal), on the same substituted sample
// fit_egg uses.
FitResult fit_egg_lognormal(const BinnedSample& sample, const FitConfig& config = {});

// PN or PL at one fixed exponent.
FitResult fit_power_at(const BinnedSample& sample, PowerFamily family, PowerExponent exponent,
                       const FitConfig& config = {});

// Profiles the family's exponent grid and keeps the exponent with the highest
// likelihood. For PL, the log exponent is skipped when its variance is not
// finite.
FitResult fit_power(const BinnedSample& sample, PowerFamily family,
                    const FitConfig& config = {});

FitResult fit_dagum(const BinnedSample& sample, const FitConfig& config = {});

// Fits GB2 starting from `seed` (as GB2 with q = 1). Without a seed, a Dagum
// fit is run first and used.
FitResult fit_gb2(const BinnedSample& sample, const FitConfig& config = {},
                  std::optional<DagumParams> seed = std::nullopt);

FitResult fit(const BinnedSample& sample, Family family, const FitConfig& config = {});

// Moments of the discrete distribution putting each bin's count at its
// midpoint; the unbounded top bin sits at top_bin_factor times its lower bound.
MomentSummary midpoint_estimate(const BinnedSample& sample, double top_bin_factor = 1.5);

}  // namespace binfit
