#include "binfit/selection.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "binfit/errors.hpp"

namespace binfit {

BestOfBreed best_of_breed(const std::optional<FitResult>& egg, const std::optional<FitResult>& pn,
                          const std::optional<FitResult>& pl) {
  BestOfBreed out;
  const FitResult* best = nullptr;
  // Visiting in tie-break order and replacing only on a strict improvement
  // leaves ties with the earlier family.
  const std::pair<Family, const std::optional<FitResult>*> order[] = {
      {Family::kPn, &pn}, {Family::kEgg, &egg}, {Family::kPl, &pl}};
  for (const auto& [family, fit] : order) {
    if (!fit->has_value()) {
      out.eliminated.push_back({family, "fit failed"});
      continue;
    }
    const FitResult& r = **fit;
    const bool finite_variance = r.moments.variance.is_finite();
    out.candidates.push_back({family, r.loglik, finite_variance});
    if (!finite_variance) {
      out.eliminated.push_back(
          {family, fmt::format("variance is {}", to_string(r.moments.variance))});
      continue;
    }
    if (!std::isfinite(r.loglik)) {
      out.eliminated.push_back({family, "log-likelihood is not finite"});
      continue;
    }
    if (best == nullptr || r.loglik > best->loglik) best = &r;
  }
  if (best == nullptr) throw NoViableCandidate("no EGG/PN/PL fit has a finite variance");
  out.chosen = *best;
  return out;
}

double relative_error(double estimate, double truth) {
  if (!(truth > 0.0)) throw DomainError(fmt::format("relative_error: truth {} is not positive", truth));
  return (estimate - truth) / truth;
}

UnitOutcome make_outcome(std::string id, double true_mean, const MomentValue& mean,
                         const MomentValue& variance) {
  UnitOutcome u{std::move(id), true_mean, mean, variance, std::nullopt};
  if (mean.is_finite()) u.error = relative_error(mean.value, true_mean);
  return u;
}

EvalReport aggregate(std::vector<UnitOutcome> per_unit) {
  if (per_unit.empty()) throw EmptyInput("aggregate: no units");
  EvalReport r;
  std::vector<double> errors;
  std::size_t undefined_mean = 0, undefined_variance = 0;
  for (const auto& u : per_unit) {
    if (u.error) errors.push_back(*u.error);
    if (!u.mean.is_finite()) ++undefined_mean;
    if (!u.variance.is_finite()) ++undefined_variance;
  }
  const double n = static_cast<double>(per_unit.size());
  r.undefined_mean_share = static_cast<double>(undefined_mean) / n;
  r.undefined_variance_share = static_cast<double>(undefined_variance) / n;
  if (!errors.empty()) {
    // Sorting makes the sums independent of unit order.
    std::sort(errors.begin(), errors.end());
    double sum = 0.0, sum_sq = 0.0;
    for (double e : errors) {
      sum += e;
      sum_sq += e * e;
    }
    const double m = static_cast<double>(errors.size());
    r.relative_bias = sum / m;
    r.rmsre = std::sqrt(sum_sq / m);
  }
  r.per_unit = std::move(per_unit);
  return r;
}

}  // namespace binfit
