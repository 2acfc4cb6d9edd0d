#include "binfit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "binfit/errors.hpp"
#include "binfit/nelder_mead.hpp"
#include "binfit/special_math.hpp"

namespace binfit {

const char* to_string(Family f) {
  switch (f) {
    case Family::kEgg: return "EGG";
    case Family::kPn: return "PN";
    case Family::kPl: return "PL";
    case Family::kDagum: return "Dagum";
    case Family::kGb2: return "GB2";
  }
  return "?";
}

std::string FitFlags::to_string() const {
  static constexpr std::pair<FitFlag, const char*> kNames[] = {
      {FitFlag::kConvergenceWarning, "ConvergenceWarning"},
      {FitFlag::kConvergenceFailure, "ConvergenceFailure"},
      {FitFlag::kMomentFallbackUsed, "MomentFallbackUsed"},
      {FitFlag::kEndpointSubstituted, "EndpointSubstituted"},
      {FitFlag::kVarianceClamped, "VarianceClamped"},
  };
  std::string out;
  for (const auto& [flag, name] : kNames) {
    if (!has(flag)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

void check(const FitConfig& c) {
  if (c.max_iterations < 1 || !(c.param_tol > 0.0) || !(c.loglik_tol > 0.0) || c.restarts < 1 ||
      !(c.top_bin_factor >= 1.0) || c.eligibility.min_total < 1 ||
      c.eligibility.min_nonzero_bins < 1) {
    throw DomainError("invalid FitConfig");
  }
  for (const auto* grid : {&c.pn_grid, &c.pl_grid}) {
    if (grid->has_value() && (*grid)->empty()) throw DomainError("FitConfig: empty exponent grid");
  }
}

double binned_loglik(const BinnedSample& sample, const FamilyParams& params) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EggParams>) {
          return binned_loglik(sample, [&](double x) { return egg_edge(p, x); });
        } else if constexpr (std::is_same_v<T, PowerParams>) {
          return binned_loglik(sample, [&](double x) { return power_edge(p, x); });
        } else if constexpr (std::is_same_v<T, DagumParams>) {
          return binned_loglik(sample, [&](double x) { return dagum_edge(p, x); });
        } else {
          return binned_loglik(sample, [&](double x) { return gb2_edge(p, x); });
        }
      },
      params);
}

BinnedSample substitute_zero_endpoint(BinnedSample sample, double value) {
  if (!sample.bins.empty() && sample.bins.front().lower == 0.0 &&
      sample.bins.front().upper > value) {
    sample.bins.front().lower = value;
  }
  return sample;
}

namespace {

// Count-weighted mean and sd of transform(x_b) over occupied bins, where x_b is
// the bin midpoint, or top_bin_factor times the lower bound for the open bin.
struct LocationScale {
  double location;
  double scale;
};

double representative(const Bin& b, double top_bin_factor) {
  if (b.unbounded()) return b.lower > 0.0 ? top_bin_factor * b.lower : 1.0;
  return 0.5 * (b.lower + b.upper);
}

template <class Transform>
LocationScale midpoint_location_scale(const BinnedSample& s, double top_bin_factor,
                                      Transform&& transform) {
  double n = 0.0, sum = 0.0;
  for (const auto& b : s.bins) {
    if (b.count <= 0) continue;
    n += static_cast<double>(b.count);
    sum += static_cast<double>(b.count) * transform(representative(b, top_bin_factor));
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& b : s.bins) {
    if (b.count <= 0) continue;
    const double d = transform(representative(b, top_bin_factor)) - mean;
    ss += static_cast<double>(b.count) * d * d;
  }
  double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) sd = std::max(0.1 * std::abs(mean), 1e-3);
  return {mean, sd};
}

BinnedSample prepare(const BinnedSample& sample, const FitConfig& config) {
  check(config);
  BinnedSample s = validate(sample);
  if (!is_eligible(s, config.eligibility)) {
    throw IneligibleSample(fmt::format(
        "sample '{}' is ineligible: total {} (need {}), {} nonzero bins (need {})", s.id, s.total,
        config.eligibility.min_total, s.nonzero_bins(), config.eligibility.min_nonzero_bins));
  }
  return s;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Optimum {
  std::vector<double> x;
  double loglik;
  SearchStatus status;
  int evaluations;
};

// Maximizes `loglik` by Nelder-Mead from every start, then restarts from the
// best point found.
template <class LogLik>
Optimum maximize(LogLik&& loglik, const std::vector<std::vector<double>>& starts,
                 const std::vector<double>& step, const FitConfig& config, std::uint64_t salt) {
  const Objective objective = [&](const std::vector<double>& x) { return -loglik(x); };
  const NelderMeadOptions options{config.max_iterations, config.param_tol, config.loglik_tol};
  std::optional<SearchResult> best;
  int evaluations = 0;
  for (const auto& x0 : starts) {
    SearchResult r = nelder_mead(objective, x0, step, options);
    evaluations += r.evaluations;
    if (!best || r.value < best->value) best = std::move(r);
  }
  best->evaluations = 0;
  SearchResult polished =
      restart_search(objective, *best, step, config.restarts, mix_seed(config.seed, salt), options);
  return {polished.x, -polished.value, polished.status, evaluations + polished.evaluations};
}

void apply_status(FitResult& r, SearchStatus status) {
  if (status == SearchStatus::kStalled) r.flags.set(FitFlag::kConvergenceWarning);
  if (status == SearchStatus::kMaxIterations) r.flags.set(FitFlag::kConvergenceFailure);
}

void apply_moments(FitResult& r, const MomentValue& m1, const MomentValue& m2) {
  r.moments = summarize_moments(m1, m2);
  if (r.moments.approximate()) r.flags.set(FitFlag::kMomentFallbackUsed);
  if (r.moments.variance_clamped) r.flags.set(FitFlag::kVarianceClamped);
}

void require_finite(const FitResult& r, const BinnedSample& s) {
  if (!std::isfinite(r.loglik)) {
    throw Error(fmt::format("{} fit of '{}' found no parameters with finite likelihood",
                            to_string(r.family), s.id));
  }
}

// EGG in coordinates scaled by the log-midpoint start: mu = mu0 + sigma0 u,
// sigma = sigma0 e^v, lambda = w.
struct EggCoordinates {
  double mu0, sigma0;

  EggParams params(double u, double v, double w) const {
    return {mu0 + sigma0 * u, sigma0 * std::exp(v), w};
  }
};

double egg_loglik(const BinnedSample& s, const EggParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.mu) ||
      !std::isfinite(p.lambda)) {
    return -INFINITY;
  }
  return binned_loglik(s, [&](double x) { return egg_edge(p, x); });
}

FitResult finish_egg(const BinnedSample& substituted, const EggParams& p, const Optimum& opt) {
  FitResult r;
  r.family = Family::kEgg;
  r.params = p;
  r.loglik = opt.loglik;
  r.evaluations = opt.evaluations;
  r.flags.set(FitFlag::kEndpointSubstituted);
  apply_status(r, opt.status);
  require_finite(r, substituted);
  apply_moments(r, egg_moment(1, p), egg_moment(2, p));
  return r;
}

constexpr double kEggZeroSubstitute = 0.5;

struct EggProblem {
  BinnedSample substituted;
  EggCoordinates coords;
};

EggProblem egg_problem(const BinnedSample& sample, const FitConfig& config) {
  const BinnedSample s = prepare(sample, config);
  const auto init = midpoint_location_scale(s, config.top_bin_factor,
                                            [](double x) { return std::log(x); });
  return {substitute_zero_endpoint(s, kEggZeroSubstitute), {init.location, init.scale}};
}

std::pair<FitResult, Optimum> egg_lognormal(const EggProblem& prob, const FitConfig& config) {
  const auto& c = prob.coords;
  auto loglik = [&](const std::vector<double>& x) {
    return egg_loglik(prob.substituted, c.params(x[0], x[1], 0.0));
  };
  const Optimum opt = maximize(loglik, {{0.0, 0.0}}, {0.2, 0.2}, config, /*salt=*/1);
  const EggParams p = c.params(opt.x[0], opt.x[1], 0.0);
  return {finish_egg(prob.substituted, p, opt), opt};
}

}  // namespace

FitResult fit_egg_lognormal(const BinnedSample& sample, const FitConfig& config) {
  return egg_lognormal(egg_problem(sample, config), config).first;
}

FitResult fit_egg(const BinnedSample& sample, const FitConfig& config) {
  const EggProblem prob = egg_problem(sample, config);
  const auto& c = prob.coords;
  // The lambda = 0 optimum is one of the starts, so the EGG fit can never do
  // worse than the lognormal it nests.
  const auto [lognormal, lognormal_opt] = egg_lognormal(prob, config);
  std::vector<std::vector<double>> starts = {{lognormal_opt.x[0], lognormal_opt.x[1], 0.0}};
  for (double lambda : {-0.5, 0.0, 0.5, 1.0}) starts.push_back({0.0, 0.0, lambda});

  auto loglik = [&](const std::vector<double>& x) {
    return egg_loglik(prob.substituted, c.params(x[0], x[1], x[2]));
  };
  Optimum opt = maximize(loglik, starts, {0.2, 0.2, 0.2}, config, /*salt=*/2);
  opt.evaluations += lognormal_opt.evaluations;
  return finish_egg(prob.substituted, c.params(opt.x[0], opt.x[1], opt.x[2]), opt);
}

namespace {

// PN/PL at one exponent on an already validated sample. The bin edges are
// transformed once; (mu, sigma) are searched in coordinates scaled by the
// midpoint start on the transformed scale.
FitResult power_at(const BinnedSample& s, PowerFamily family, PowerExponent exponent,
                   const FitConfig& config, std::uint64_t salt) {
  auto transform = [&](double x) { return power_transform(x, exponent); };
  const auto init = midpoint_location_scale(s, config.top_bin_factor, transform);
  const double scale0 =
      family == PowerFamily::kLogistic ? init.scale * std::sqrt(3.0) / std::numbers::pi
                                       : init.scale;

  std::vector<double> t_edges;
  std::vector<double> counts;
  t_edges.reserve(s.bins.size() + 1);
  t_edges.push_back(transform(s.bins.front().lower));
  for (const auto& b : s.bins) {
    t_edges.push_back(transform(b.upper));
    counts.push_back(static_cast<double>(b.count));
  }

  auto edge = [family](double t, double mu, double sigma) -> EdgeProbability {
    if (t == -INFINITY) return {0.0, 1.0};
    if (t == INFINITY) return {1.0, 0.0};
    const double z = (t - mu) / sigma;
    if (family == PowerFamily::kNormal) return {std_normal_cdf(z), std_normal_sf(z)};
    return {std_logistic_cdf(z), std_logistic_sf(z)};
  };
  auto loglik_at = [&](double mu, double sigma) -> double {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) return -INFINITY;
    double total = 0.0;
    EdgeProbability lo = edge(t_edges[0], mu, sigma);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const EdgeProbability hi = edge(t_edges[i + 1], mu, sigma);
      if (counts[i] > 0.0) {
        const double prob = interval_probability(lo, hi);
        if (!(prob > 0.0)) return -INFINITY;
        total += counts[i] * std::log(prob);
      }
      lo = hi;
    }
    return total;
  };
  auto loglik = [&](const std::vector<double>& x) {
    return loglik_at(init.location + scale0 * x[0], scale0 * std::exp(x[1]));
  };
  const Optimum opt = maximize(loglik, {{0.0, 0.0}}, {0.2, 0.2}, config, salt);

  PowerParams p{family, exponent, init.location + scale0 * opt.x[0], scale0 * std::exp(opt.x[1])};
  FitResult r;
  r.family = family == PowerFamily::kNormal ? Family::kPn : Family::kPl;
  r.params = p;
  r.loglik = opt.loglik;
  r.evaluations = opt.evaluations;
  apply_status(r, opt.status);
  if (std::isfinite(r.loglik)) apply_moments(r, power_moment(1, p), power_moment(2, p));
  return r;
}

std::uint64_t exponent_salt(PowerFamily family, PowerExponent e) {
  return 100 + (family == PowerFamily::kNormal ? 0 : 1000) + static_cast<std::uint64_t>(e.inverse());
}

}  // namespace

FitResult fit_power_at(const BinnedSample& sample, PowerFamily family, PowerExponent exponent,
                       const FitConfig& config) {
  const BinnedSample s = prepare(sample, config);
  FitResult r = power_at(s, family, exponent, config, exponent_salt(family, exponent));
  require_finite(r, s);
  return r;
}

FitResult fit_power(const BinnedSample& sample, PowerFamily family, const FitConfig& config) {
  const BinnedSample s = prepare(sample, config);
  const auto& override_grid = family == PowerFamily::kNormal ? config.pn_grid : config.pl_grid;
  const std::vector<PowerExponent> grid =
      override_grid ? *override_grid : default_exponent_grid(family);

  std::optional<FitResult> best;
  std::vector<ProfilePoint> profile;
  int evaluations = 0;
  for (const PowerExponent e : grid) {
    FitResult r = power_at(s, family, e, config, exponent_salt(family, e));
    evaluations += r.evaluations;
    const auto& p = std::get<PowerParams>(r.params);
    ProfilePoint point{e, p.mu, p.sigma, r.loglik, false};
    if (family == PowerFamily::kLogistic && std::isfinite(r.loglik) &&
        !r.moments.variance.is_finite()) {
      point.excluded = true;
    }
    profile.push_back(point);
    if (point.excluded || !std::isfinite(r.loglik)) continue;
    if (!best || r.loglik > best->loglik) best = std::move(r);
  }
  if (!best) {
    throw AllGridPointsFailed(fmt::format("{} fit of '{}': no exponent in the grid gave a usable fit",
                                          to_string(family), s.id));
  }
  best->profile = std::move(profile);
  best->evaluations = evaluations;
  return *best;
}

namespace {

double dagum_loglik(const BinnedSample& s, const DagumParams& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0) || !(p.p > 0.0) || !std::isfinite(p.a) ||
      !std::isfinite(p.b) || !std::isfinite(p.p)) {
    return -INFINITY;
  }
  return binned_loglik(s, [&](double x) { return dagum_edge(p, x); });
}

double gb2_loglik(const BinnedSample& s, const Gb2Params& p) {
  if (p.a == 0.0 || !std::isfinite(p.a) || !(p.b > 0.0) || !(p.p > 0.0) || !(p.q > 0.0) ||
      !std::isfinite(p.b) || !std::isfinite(p.p) || !std::isfinite(p.q)) {
    return -INFINITY;
  }
  return binned_loglik(s, [&](double x) { return gb2_edge(p, x); });
}

FitResult dagum_on(const BinnedSample& s, const FitConfig& config) {
  const auto init = midpoint_location_scale(s, config.top_bin_factor,
                                            [](double x) { return std::log(x); });
  // Dagum with p = 1 is log-logistic; match its log-scale sd to the start.
  const double a0 = std::numbers::pi / (std::sqrt(3.0) * init.scale);
  const double b0 = std::exp(init.location);
  auto params = [&](const std::vector<double>& x) {
    return DagumParams{a0 * std::exp(x[0]), b0 * std::exp(x[1]), std::exp(x[2])};
  };
  auto loglik = [&](const std::vector<double>& x) { return dagum_loglik(s, params(x)); };
  std::vector<std::vector<double>> starts;
  for (double p : {0.5, 1.0, 2.0}) starts.push_back({0.0, 0.0, std::log(p)});
  const Optimum opt = maximize(loglik, starts, {0.2, 0.2, 0.2}, config, /*salt=*/3);

  const DagumParams p = params(opt.x);
  FitResult r;
  r.family = Family::kDagum;
  r.params = p;
  r.loglik = opt.loglik;
  r.evaluations = opt.evaluations;
  apply_status(r, opt.status);
  require_finite(r, s);
  apply_moments(r, dagum_moment(1, p), dagum_moment(2, p));
  return r;
}

}  // namespace

FitResult fit_dagum(const BinnedSample& sample, const FitConfig& config) {
  return dagum_on(prepare(sample, config), config);
}

FitResult fit_gb2(const BinnedSample& sample, const FitConfig& config,
                  std::optional<DagumParams> seed) {
  const BinnedSample s = prepare(sample, config);
  int evaluations = 0;
  if (!seed) {
    const FitResult dagum = dagum_on(s, config);
    seed = std::get<DagumParams>(dagum.params);
    evaluations += dagum.evaluations;
  }
  check(*seed);
  const Gb2Params start{seed->a, seed->b, seed->p, 1.0};
  // a moves additively so the search may cross to negative values. The
  // second coordinate shifts m = ln b + (ln p - ln q) / a, roughly the log
  // median, which stays put while p and q run off along the flat ridge
  // toward the generalized gamma and lognormal limits.
  const double m0 = std::log(start.b) + std::log(start.p) / start.a;
  auto params = [&](const std::vector<double>& x) {
    const double a = start.a + std::abs(start.a) * x[0];
    const double log_p = std::log(start.p) + x[2];
    return Gb2Params{a, std::exp(m0 + x[1] - (log_p - x[3]) / a), std::exp(log_p), std::exp(x[3])};
  };
  auto loglik = [&](const std::vector<double>& x) { return gb2_loglik(s, params(x)); };
  const Optimum opt =
      maximize(loglik, {{0.0, 0.0, 0.0, 0.0}}, {0.1, 0.2, 0.2, 0.2}, config, /*salt=*/4);

  const Gb2Params p = params(opt.x);
  FitResult r;
  r.family = Family::kGb2;
  r.params = p;
  r.loglik = opt.loglik;
  r.evaluations = evaluations + opt.evaluations;
  apply_status(r, opt.status);
  require_finite(r, s);
  apply_moments(r, gb2_moment(1, p), gb2_moment(2, p));
  return r;
}

FitResult fit(const BinnedSample& sample, Family family, const FitConfig& config) {
  switch (family) {
    case Family::kEgg: return fit_egg(sample, config);
    case Family::kPn: return fit_power(sample, PowerFamily::kNormal, config);
    case Family::kPl: return fit_power(sample, PowerFamily::kLogistic, config);
    case Family::kDagum: return fit_dagum(sample, config);
    case Family::kGb2: return fit_gb2(sample, config);
  }
  throw DomainError("fit: unknown family");
}

MomentSummary midpoint_estimate(const BinnedSample& sample, double top_bin_factor) {
  const BinnedSample s = validate(sample);
  if (s.total <= 0) {
    return summarize_moments(MomentValue::indeterminate(), MomentValue::indeterminate());
  }
  const double n = static_cast<double>(s.total);
  double mean = 0.0;
  for (const auto& b : s.bins) mean += b.count * representative(b, top_bin_factor);
  mean /= n;
  double var = 0.0;
  for (const auto& b : s.bins) {
    const double d = representative(b, top_bin_factor) - mean;
    var += b.count * d * d;
  }
  var /= n;
  return summarize_moments(MomentValue::finite(mean), MomentValue::finite(var + mean * mean));
}

}  // namespace binfit
