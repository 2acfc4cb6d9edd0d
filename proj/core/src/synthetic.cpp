#include "binfit/synthetic.hpp"

#include <algorithm>
#include <exception>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "binfit/errors.hpp"
#include "binfit/parallel.hpp"

namespace binfit {

const char* family_name(const GeneratingFamily& family) {
  static constexpr const char* kNames[] = {"lognormal", "gamma", "weibull", "dagum"};
  return kNames[family.index()];
}

void check(const GeneratorSpec& s) {
  if (s.n_units < 1) throw DomainError("GeneratorSpec: n_units must be at least 1");
  if (s.min_size < 1 || s.max_size < s.min_size) {
    throw DomainError("GeneratorSpec: unit sizes must satisfy 1 <= min <= max");
  }
  if (s.bin_edges.size() < 2 || s.bin_edges.front() != 0.0 || s.bin_edges.back() != kInf) {
    throw DomainError("GeneratorSpec: bin edges must run from 0 to +inf");
  }
  for (std::size_t i = 1; i < s.bin_edges.size(); ++i) {
    if (!(s.bin_edges[i] > s.bin_edges[i - 1])) {
      throw DomainError("GeneratorSpec: bin edges must be strictly increasing");
    }
  }
  if (!(s.scale_jitter >= 0.0) || !std::isfinite(s.scale_jitter)) {
    throw DomainError("GeneratorSpec: scale_jitter must be finite and nonnegative");
  }
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        bool ok;
        if constexpr (std::is_same_v<T, LognormalGen>) {
          ok = std::isfinite(f.mu) && f.sigma > 0.0 && std::isfinite(f.sigma);
        } else if constexpr (std::is_same_v<T, DagumParams>) {
          check(f);
          // the mean must exist for relative errors to make sense
          ok = f.a > 1.0;
        } else {
          ok = f.shape > 0.0 && f.scale > 0.0 && std::isfinite(f.shape) && std::isfinite(f.scale);
        }
        if (!ok) throw DomainError("GeneratorSpec: invalid generating parameters");
      },
      s.family);
}

namespace {

struct Moments2 {
  double mean;
  double variance;
};

Moments2 true_moments(const GeneratingFamily& family, double c) {
  using boost::math::tgamma;
  const Moments2 m = std::visit(
      [](const auto& f) -> Moments2 {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LognormalGen>) {
          const double s2 = f.sigma * f.sigma;
          return {std::exp(f.mu + 0.5 * s2), std::expm1(s2) * std::exp(2.0 * f.mu + s2)};
        } else if constexpr (std::is_same_v<T, GammaGen>) {
          return {f.shape * f.scale, f.shape * f.scale * f.scale};
        } else if constexpr (std::is_same_v<T, WeibullGen>) {
          const double g1 = tgamma(1.0 + 1.0 / f.shape);
          const double g2 = tgamma(1.0 + 2.0 / f.shape);
          return {f.scale * g1, f.scale * f.scale * (g2 - g1 * g1)};
        } else {
          const MomentSummary s = summarize_moments(dagum_moment(1, f), dagum_moment(2, f));
          return {s.mean.value, s.variance.is_finite() ? s.variance.value : kInf};
        }
      },
      family);
  return {c * m.mean, c * c * m.variance};
}

class Sampler {
 public:
  Sampler(const GeneratingFamily& family, double c) : family_(family), c_(c) {}

  double operator()(std::mt19937_64& rng) const {
    return c_ * std::visit(
                    [&rng](const auto& f) -> double {
                      using T = std::decay_t<decltype(f)>;
                      if constexpr (std::is_same_v<T, LognormalGen>) {
                        return std::lognormal_distribution<double>(f.mu, f.sigma)(rng);
                      } else if constexpr (std::is_same_v<T, GammaGen>) {
                        return std::gamma_distribution<double>(f.shape, f.scale)(rng);
                      } else if constexpr (std::is_same_v<T, WeibullGen>) {
                        return std::weibull_distribution<double>(f.shape, f.scale)(rng);
                      } else {
                        // inverse of F(x) = (1 + (x/b)^-a)^-p
                        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                        while (u == 0.0) u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                        return f.b * std::pow(std::expm1(-std::log(u) / f.p), -1.0 / f.a);
                      }
                    },
                    family_);
  }

 private:
  const GeneratingFamily& family_;
  double c_;
};

}  // namespace

SyntheticUnit generate_unit(const GeneratorSpec& spec, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);

  double c = 1.0;
  if (spec.scale_jitter > 0.0) {
    c = std::exp(spec.scale_jitter * std::normal_distribution<double>(0.0, 1.0)(rng));
  }
  const std::int64_t size =
      std::uniform_int_distribution<std::int64_t>(spec.min_size, spec.max_size)(rng);

  const auto& edges = spec.bin_edges;
  std::vector<std::int64_t> counts(edges.size() - 1, 0);
  const Sampler draw(spec.family, c);
  double sum = 0.0;
  for (std::int64_t i = 0; i < size; ++i) {
    const double x = draw(rng);
    sum += x;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    const auto bin = std::clamp<std::ptrdiff_t>(it - edges.begin() - 1, 0,
                                                static_cast<std::ptrdiff_t>(counts.size()) - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }

  std::vector<Bin> bins;
  bins.reserve(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) bins.push_back({edges[b], edges[b + 1], counts[b]});
  SyntheticUnit unit;
  unit.sample = make_sample(fmt::format("{}-{:04d}", family_name(spec.family), index), std::move(bins));
  if (spec.census_rounding) unit.sample = census_round(std::move(unit.sample));
  const Moments2 m = true_moments(spec.family, c);
  unit.true_mean = m.mean;
  unit.true_variance = m.variance;
  unit.empirical_mean = sum / static_cast<double>(size);
  return unit;
}

std::vector<SyntheticUnit> generate(const GeneratorSpec& spec) {
  check(spec);
  std::vector<SyntheticUnit> units;
  units.reserve(static_cast<std::size_t>(spec.n_units));
  for (int i = 0; i < spec.n_units; ++i) units.push_back(generate_unit(spec, i));
  return units;
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::kEgg: return "EGG";
    case Estimator::kPn: return "PN";
    case Estimator::kPl: return "PL";
    case Estimator::kBest: return "best";
    case Estimator::kDagum: return "dagum";
    case Estimator::kGb2: return "gb2";
    case Estimator::kMidpoint: return "midpoint";
  }
  return "?";
}

std::optional<Estimator> parse_estimator(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (Estimator e : {Estimator::kEgg, Estimator::kPn, Estimator::kPl, Estimator::kBest,
                      Estimator::kDagum, Estimator::kGb2, Estimator::kMidpoint}) {
    std::string n = to_string(e);
    std::transform(n.begin(), n.end(), n.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (n == lower) return e;
  }
  return std::nullopt;
}

namespace {

// Fits shared between estimators of one unit (best reuses EGG/PN/PL, GB2
// starts from the Dagum optimum).
class UnitFitter {
 public:
  UnitFitter(const BinnedSample& sample, const FitConfig& config)
      : sample_(sample), config_(config) {}

  UnitFit run(Estimator e) {
    UnitFit out;
    try {
      switch (e) {
        case Estimator::kEgg: out.fit = get(Family::kEgg); break;
        case Estimator::kPn: out.fit = get(Family::kPn); break;
        case Estimator::kPl: out.fit = get(Family::kPl); break;
        case Estimator::kDagum: out.fit = get(Family::kDagum); break;
        case Estimator::kGb2: out.fit = get(Family::kGb2); break;
        case Estimator::kBest: {
          auto egg = try_get(Family::kEgg);
          auto pn = try_get(Family::kPn);
          auto pl = try_get(Family::kPl);
          // all three failed: report why rather than an empty candidate set
          if (!egg && !pn && !pl) get(Family::kPn);
          out.best = best_of_breed(std::move(egg), std::move(pn), std::move(pl));
          out.fit = out.best->chosen;
          break;
        }
        case Estimator::kMidpoint:
          out.moments = midpoint_estimate(sample_, config_.top_bin_factor);
          return out;
      }
      out.moments = out.fit->moments;
    } catch (const std::exception& ex) {
      out.fit.reset();
      out.best.reset();
      out.moments = summarize_moments(MomentValue::indeterminate(), MomentValue::indeterminate());
      out.error = ex.what();
      out.error_kind = error_kind(ex);
    }
    return out;
  }

 private:
  struct Slot {
    bool done = false;
    std::optional<FitResult> fit;
    std::exception_ptr error;
  };

  const FitResult& get(Family f) {
    Slot& s = slots_[static_cast<std::size_t>(f)];
    if (!s.done) {
      s.done = true;
      try {
        if (f == Family::kGb2) {
          std::optional<DagumParams> seed;
          if (const auto& d = try_get(Family::kDagum)) seed = std::get<DagumParams>(d->params);
          s.fit = fit_gb2(sample_, config_, seed);
        } else {
          s.fit = fit(sample_, f, config_);
        }
      } catch (const std::exception&) {
        s.error = std::current_exception();
      }
    }
    if (!s.fit) std::rethrow_exception(s.error);
    return *s.fit;
  }

  std::optional<FitResult> try_get(Family f) {
    try {
      return get(f);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  const BinnedSample& sample_;
  const FitConfig& config_;
  Slot slots_[5];
};

}  // namespace

UnitFit estimate(const BinnedSample& sample, Estimator estimator, const FitConfig& config) {
  return UnitFitter(sample, config).run(estimator);
}

BenchmarkResult run_benchmark(const std::vector<SyntheticUnit>& units,
                              const std::vector<Estimator>& estimators,
                              const BenchmarkOptions& options) {
  if (estimators.empty()) throw EmptyEstimatorSet("run_benchmark: no estimators requested");
  check(options.fit);
  if (units.empty()) throw EmptyInput("run_benchmark: no units");

  std::vector<std::vector<UnitFit>> fits(units.size());
  parallel_for(units.size(), options.threads, [&](std::size_t i) {
    UnitFitter fitter(units[i].sample, options.fit);
    for (Estimator e : estimators) fits[i].push_back(fitter.run(e));
  });

  BenchmarkResult result;
  result.units = units;
  for (std::size_t k = 0; k < estimators.size(); ++k) {
    EstimatorRun run;
    run.estimator = estimators[k];
    std::vector<UnitOutcome> outcomes;
    for (std::size_t i = 0; i < units.size(); ++i) {
      UnitFit& f = fits[i][k];
      outcomes.push_back(make_outcome(units[i].sample.id, units[i].true_mean, f.moments.mean,
                                      f.moments.variance));
      run.fits.push_back(std::move(f));
    }
    run.report = aggregate(std::move(outcomes));
    result.runs.push_back(std::move(run));
  }
  return result;
}

BenchmarkResult run_benchmark(const GeneratorSpec& spec, const std::vector<Estimator>& estimators,
                              const BenchmarkOptions& options) {
  if (estimators.empty()) throw EmptyEstimatorSet("run_benchmark: no estimators requested");
  return run_benchmark(generate(spec), estimators, options);
}

std::vector<double> moving_average(const std::vector<double>& values, double span) {
  const std::size_t n = values.size();
  std::size_t window = static_cast<std::size_t>(std::lround(span * static_cast<double>(n)));
  window = std::max<std::size_t>(1, window | 1);
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    out[i] = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(lo),
                             values.begin() + static_cast<std::ptrdiff_t>(hi), 0.0) /
             static_cast<double>(hi - lo);
  }
  return out;
}

namespace {

std::string number_or_na(const std::optional<double>& v) {
  return v ? fmt::format("{:.10g}", *v) : std::string("NA");
}

}  // namespace

void write_metrics(std::ostream& out, const BenchmarkResult& result) {
  out << "estimator,units,relative_bias,rmsre,undefined_mean_share,undefined_variance_share,"
         "failed_units\n";
  for (const auto& run : result.runs) {
    const auto failed = std::count_if(run.fits.begin(), run.fits.end(),
                                      [](const UnitFit& f) { return !f.error.empty(); });
    out << fmt::format("{},{},{},{},{:.10g},{:.10g},{}\n", to_string(run.estimator),
                       run.report.per_unit.size(), number_or_na(run.report.relative_bias),
                       number_or_na(run.report.rmsre), run.report.undefined_mean_share,
                       run.report.undefined_variance_share, failed);
  }
}

void write_scatter(std::ostream& out, const BenchmarkResult& result) {
  out << "estimator,id,true_mean,estimate,relative_error,smoothed_error\n";
  for (const auto& run : result.runs) {
    const auto& units = run.report.per_unit;
    std::vector<std::size_t> defined;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (units[i].error) defined.push_back(i);
    }
    std::stable_sort(defined.begin(), defined.end(), [&](std::size_t a, std::size_t b) {
      return units[a].true_mean < units[b].true_mean;
    });
    std::vector<double> errors;
    for (std::size_t i : defined) errors.push_back(*units[i].error);
    const std::vector<double> smooth = moving_average(errors);
    std::vector<std::optional<double>> smoothed(units.size());
    for (std::size_t j = 0; j < defined.size(); ++j) smoothed[defined[j]] = smooth[j];

    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto& u = units[i];
      out << fmt::format("{},{},{:.10g},{},{},{}\n", to_string(run.estimator), u.id, u.true_mean,
                         to_string(u.mean), number_or_na(u.error), number_or_na(smoothed[i]));
    }
  }
}

}  // namespace binfit
