#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "binfit/binned_data.hpp"
#include "binfit/comparison.hpp"
#include "binfit/fitting.hpp"
#include "binfit/selection.hpp"

namespace binfit {

struct LognormalGen {
  double mu = 10.8;
  double sigma = 0.75;
};

struct GammaGen {
  double shape = 2.0;
  double scale = 30000.0;
};

struct WeibullGen {
  double shape = 1.5;
  double scale = 65000.0;
};

using GeneratingFamily = std::variant<LognormalGen, GammaGen, WeibullGen, DagumParams>;

const char* family_name(const GeneratingFamily& family);

struct GeneratorSpec {
  GeneratingFamily family = LognormalGen{};
  int n_units = 200;
  std::int64_t min_size = 40;
  std::int64_t max_size = 2000;
  std::vector<double> bin_edges = census_2000_edges();
  bool census_rounding = true;
  // Each unit's scale is multiplied by exp(scale_jitter * Z), Z standard
  // normal, so units differ in their true means.
  double scale_jitter = 0.0;
  std::uint64_t seed = 0;
};

void check(const GeneratorSpec& spec);

struct SyntheticUnit {
  BinnedSample sample;
  double true_mean = 0.0;
  double true_variance = 0.0;  // +inf when the generating variance diverges
  // mean of the drawn incomes before binning
  double empirical_mean = 0.0;
};

// Unit i is drawn from its own generator seeded by (spec.seed, i), so the
// result does not depend on how units are scheduled.
std::vector<SyntheticUnit> generate(const GeneratorSpec& spec);
SyntheticUnit generate_unit(const GeneratorSpec& spec, int index);

enum class Estimator { kEgg, kPn, kPl, kBest, kDagum, kGb2, kMidpoint };

const char* to_string(Estimator e);
// Case-insensitive; nullopt for unknown names.
std::optional<Estimator> parse_estimator(const std::string& name);

struct UnitFit {
  MomentSummary moments;
  std::optional<FitResult> fit;      // absent for midpoint and on error
  std::optional<BestOfBreed> best;   // best-of-breed only
  std::string error;                 // what the fit threw, if it did
  std::string error_kind;
};

// Runs one estimator on one sample, catching whatever the fit throws.
UnitFit estimate(const BinnedSample& sample, Estimator estimator, const FitConfig& config = {});

struct EstimatorRun {
  Estimator estimator = Estimator::kBest;
  EvalReport report;
  std::vector<UnitFit> fits;  // parallel to the units
};

struct BenchmarkResult {
  std::vector<SyntheticUnit> units;
  std::vector<EstimatorRun> runs;
};

struct BenchmarkOptions {
  FitConfig fit;
  // 0 uses the hardware concurrency
  unsigned threads = 0;
};

// Fits every estimator to every unit. A fit that throws leaves the unit
// undefined for that estimator. Throws EmptyEstimatorSet for no estimators.
BenchmarkResult run_benchmark(const std::vector<SyntheticUnit>& units,
                              const std::vector<Estimator>& estimators,
                              const BenchmarkOptions& options = {});
BenchmarkResult run_benchmark(const GeneratorSpec& spec, const std::vector<Estimator>& estimators,
                              const BenchmarkOptions& options = {});

// Centered moving average of `values` with an odd window of about
// span * n points, truncated at the ends.
std::vector<double> moving_average(const std::vector<double>& values, double span = 0.2);

// estimator,units,relative_bias,rmsre,undefined_mean_share,undefined_variance_share,failed_units
void write_metrics(std::ostream& out, const BenchmarkResult& result);
// estimator,id,true_mean,estimate,relative_error,smoothed_error; the
// smoothed error is a moving average in order of log true mean.
void write_scatter(std::ostream& out, const BenchmarkResult& result);

}  // namespace binfit
