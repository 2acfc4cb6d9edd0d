#pragma once

#include <optional>
#include <string>
#include <vector>

#include "binfit/fitting.hpp"
#include "binfit/moments.hpp"

namespace binfit {

struct Candidate {
  Family family = Family::kEgg;
  double loglik = -INFINITY;
  bool finite_variance = false;
};

struct Elimination {
  Family family = Family::kEgg;
  std::string reason;
};

struct BestOfBreed {
  FitResult chosen;
  std::vector<Candidate> candidates;
  std::vector<Elimination> eliminated;
};

// Drops fits that are missing or whose variance is not finite, then keeps the
// highest log-likelihood. Exact ties go to PN, then EGG, then PL. Throws
// NoViableCandidate when nothing survives.
BestOfBreed best_of_breed(const std::optional<FitResult>& egg, const std::optional<FitResult>& pn,
                          const std::optional<FitResult>& pl);

// (estimate - truth) / truth; DomainError unless truth > 0.
double relative_error(double estimate, double truth);

struct UnitOutcome {
  std::string id;
  double true_mean = 0.0;
  MomentValue mean;      // estimated
  MomentValue variance;  // estimated
  // relative error of a finite mean estimate
  std::optional<double> error;
};

// Builds an outcome, computing the relative error when the mean is finite.
UnitOutcome make_outcome(std::string id, double true_mean, const MomentValue& mean,
                         const MomentValue& variance);

struct EvalReport {
  std::vector<UnitOutcome> per_unit;
  // Over units with a finite mean estimate; empty when there are none.
  std::optional<double> relative_bias;
  std::optional<double> rmsre;
  double undefined_mean_share = 0.0;
  double undefined_variance_share = 0.0;
};

// Throws EmptyInput for no units.
EvalReport aggregate(std::vector<UnitOutcome> per_unit);

}  // namespace binfit
