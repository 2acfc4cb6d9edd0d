#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "binfit/errors.hpp"
#include "binfit/quadrature.hpp"
#include "binfit/synthetic.hpp"

namespace binfit {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Generate, LargeLognormalUnitMatchesAnalyticMean) {
  GeneratorSpec spec;
  spec.family = LognormalGen{11.0, 0.7};
  spec.n_units = 1;
  spec.min_size = spec.max_size = 1000000;
  spec.census_rounding = false;
  const SyntheticUnit u = generate(spec).front();
  EXPECT_EQ(u.sample.total, 1000000);
  EXPECT_NEAR(u.true_mean, std::exp(11.0 + 0.245), 1e-6);
  EXPECT_NEAR(u.empirical_mean / u.true_mean, 1.0, 0.005);
}

TEST(Generate, MinimumSizeIsEligible) {
  GeneratorSpec spec;
  spec.family = GammaGen{};
  spec.n_units = 30;
  spec.min_size = spec.max_size = 40;
  spec.census_rounding = false;
  for (const auto& u : generate(spec)) {
    EXPECT_EQ(u.sample.total, 40);
    EXPECT_GE(u.sample.total, EligibilityRule{}.min_total);
  }
}

TEST(Generate, Deterministic) {
  GeneratorSpec spec;
  spec.n_units = 20;
  spec.scale_jitter = 0.3;
  spec.seed = 99;
  const auto a = generate(spec);
  const auto b = generate(spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].sample, b[i].sample);
    EXPECT_EQ(a[i].true_mean, b[i].true_mean);
  }
  EXPECT_EQ(generate_unit(spec, 7).sample, a[7].sample);
  spec.seed = 100;
  EXPECT_NE(generate(spec)[0].sample, a[0].sample);
}

TEST(Generate, SamplesAreValidCensusBins) {
  GeneratorSpec spec;
  spec.family = WeibullGen{};
  spec.n_units = 10;
  for (const auto& u : generate(spec)) {
    const BinnedSample v = validate(u.sample);
    EXPECT_EQ(v.edges(), census_2000_edges());
    for (const Bin& b : v.bins) EXPECT_EQ(b.count, census_round(b.count));
  }
}

TEST(Generate, TrueMomentsMatchQuadrature) {
  struct Case {
    GeneratingFamily family;
    std::function<double(double)> density;
  };
  const double mu = 10.8, s = 0.75, k = 2.0, th = 30000.0, wk = 1.5, wl = 65000.0;
  const std::vector<Case> cases = {
      {LognormalGen{mu, s},
       [=](double x) {
         const double z = (std::log(x) - mu) / s;
         return std::exp(-0.5 * z * z) / (x * s * std::sqrt(2.0 * kPi));
       }},
      {GammaGen{k, th},
       [=](double x) {
         return std::exp((k - 1.0) * std::log(x / th) - x / th - std::lgamma(k)) / th;
       }},
      {WeibullGen{wk, wl},
       [=](double x) {
         return wk / wl * std::pow(x / wl, wk - 1.0) * std::exp(-std::pow(x / wl, wk));
       }},
      {DagumParams{3.5, 50000.0, 0.8},
       [](double x) {
         const double r = std::pow(x / 50000.0, -3.5);
         return 3.5 * 0.8 / x * r * std::pow(1.0 + r, -1.8);
       }},
  };
  for (const auto& c : cases) {
    GeneratorSpec spec;
    spec.family = c.family;
    spec.n_units = 1;
    spec.min_size = spec.max_size = 1;
    const SyntheticUnit u = generate(spec).front();
    const auto m1 = moment_by_quadrature(c.density, 1, {}, 50000.0);
    const auto m2 = moment_by_quadrature(c.density, 2, {}, 50000.0);
    ASSERT_TRUE(m1.converged && m2.converged) << family_name(c.family);
    EXPECT_NEAR(u.true_mean / m1.value, 1.0, 1e-6) << family_name(c.family);
    const double var = m2.value - m1.value * m1.value;
    EXPECT_NEAR(u.true_variance / var, 1.0, 1e-6) << family_name(c.family);
  }
}

TEST(Generate, InvalidSpecs) {
  GeneratorSpec spec;
  spec.n_units = 0;
  EXPECT_THROW(generate(spec), DomainError);
  spec = {};
  spec.min_size = 10;
  spec.max_size = 5;
  EXPECT_THROW(generate(spec), DomainError);
  spec = {};
  spec.bin_edges = {0.0, 10.0, 5.0, kInf};
  EXPECT_THROW(generate(spec), DomainError);
  spec = {};
  spec.family = DagumParams{0.9, 1.0, 1.0};
  EXPECT_THROW(generate(spec), DomainError);
}

TEST(Estimators, Names) {
  EXPECT_EQ(parse_estimator("egg"), Estimator::kEgg);
  EXPECT_EQ(parse_estimator("BEST"), Estimator::kBest);
  EXPECT_EQ(parse_estimator("Midpoint"), Estimator::kMidpoint);
  EXPECT_EQ(parse_estimator("GB2"), Estimator::kGb2);
  EXPECT_FALSE(parse_estimator("logspline").has_value());
}

TEST(RunBenchmark, EmptyEstimatorSet) {
  EXPECT_THROW(run_benchmark(GeneratorSpec{}, {}), EmptyEstimatorSet);
}

TEST(RunBenchmark, FaultIsolation) {
  std::vector<SyntheticUnit> units(2);
  units[0].sample = mcnary_2000();
  units[0].true_mean = 17000.0;
  units[1].sample = make_sample("tiny", {{0, 10, 3}, {10, kInf, 4}});
  units[1].true_mean = 10.0;
  const BenchmarkResult r = run_benchmark(units, {Estimator::kBest, Estimator::kMidpoint});
  ASSERT_EQ(r.runs.size(), 2u);
  const EstimatorRun& best = r.runs[0];
  EXPECT_TRUE(best.fits[0].error.empty());
  EXPECT_EQ(best.fits[1].error_kind, "IneligibleSample");
  EXPECT_EQ(best.report.undefined_mean_share, 0.5);
  // the midpoint estimate does not check eligibility
  EXPECT_TRUE(r.runs[1].fits[1].error.empty());
}

TEST(RunBenchmark, OutputsAndThreadIndependence) {
  GeneratorSpec spec;
  spec.n_units = 6;
  spec.min_size = 200;
  spec.max_size = 400;
  spec.seed = 5;
  const std::vector<Estimator> est = {Estimator::kPn, Estimator::kMidpoint};
  const BenchmarkResult one = run_benchmark(spec, est, {FitConfig{}, 1});
  const BenchmarkResult four = run_benchmark(spec, est, {FitConfig{}, 4});
  std::ostringstream m1, m4, s1, s4;
  write_metrics(m1, one);
  write_metrics(m4, four);
  write_scatter(s1, one);
  write_scatter(s4, four);
  EXPECT_EQ(m1.str(), m4.str());
  EXPECT_EQ(s1.str(), s4.str());

  std::istringstream lines(m1.str());
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(s1.str().rfind("estimator,id,true_mean,estimate,relative_error,smoothed_error\n", 0), 0u);
}

TEST(MovingAverage, Window) {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto flat = moving_average(v, 0.0);
  EXPECT_EQ(flat, v);
  const auto smooth = moving_average(v, 0.3);  // window 3
  EXPECT_DOUBLE_EQ(smooth[0], 1.5);
  EXPECT_DOUBLE_EQ(smooth[5], 6.0);
  EXPECT_DOUBLE_EQ(smooth[9], 9.5);
  EXPECT_TRUE(moving_average({}, 0.2).empty());
}

}  // namespace
}  // namespace binfit
