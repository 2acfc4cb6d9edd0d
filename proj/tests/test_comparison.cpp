#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "binfit/binned_data.hpp"
#include "binfit/comparison.hpp"
#include "binfit/errors.hpp"
#include "binfit/quadrature.hpp"

namespace binfit {
namespace {

constexpr double kPi = std::numbers::pi;

double dagum_density(double a, double b, double p, double x) {
  const double r = std::pow(x / b, -a);
  return a * p / x * r * std::pow(1.0 + r, -p - 1.0);
}

// |a| x^(ap-1) / (b^(ap) B(p,q) (1 + (x/b)^a)^(p+q))
double gb2_density(double a, double b, double p, double q, double x) {
  const double log_beta = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
  return std::exp(std::log(std::abs(a)) + (a * p - 1.0) * std::log(x) - a * p * std::log(b) -
                  log_beta - (p + q) * std::log1p(std::pow(x / b, a)));
}

TEST(DagumCdf, Examples) {
  EXPECT_NEAR(dagum_cdf({3.0, 7.0, 1.0}, 7.0), 0.5, 1e-15);
  EXPECT_EQ(dagum_edge({3.0, 7.0, 1.0}, 0.0).cdf, 0.0);
  EXPECT_EQ(dagum_edge({3.0, 7.0, 1.0}, kInf).cdf, 1.0);
  EXPECT_LT(dagum_cdf({3.0, 7.0, 1.0}, 1e-8), 1e-20);
  EXPECT_GT(dagum_cdf({3.0, 7.0, 1.0}, 1e8), 1.0 - 1e-15);

  const auto q = integrate([](double x) { return dagum_density(2.0, 1.0, 1.5, x); }, 0.0, 2.0);
  EXPECT_NEAR(dagum_cdf({2.0, 1.0, 1.5}, 2.0), q.value, 1e-10);
  EXPECT_NEAR(dagum_cdf({2.0, 1.0, 1.5}, 2.0), 0.7155417527999327, 1e-14);
  EXPECT_THROW(dagum_cdf({2.0, 1.0, 1.5}, 0.0), DomainError);
  EXPECT_THROW(dagum_cdf({-2.0, 1.0, 1.5}, 1.0), DomainError);
}

TEST(DagumMoment, Examples) {
  EXPECT_EQ(dagum_moment(2, {2.0, 1.0, 1.0}).kind, MomentValue::Kind::kIndeterminate);
  EXPECT_EQ(dagum_moment(1, {0.8, 1.0, 1.0}).kind, MomentValue::Kind::kIndeterminate);
  const MomentValue m = dagum_moment(1, {2.0, 1.0, 1.0});
  ASSERT_TRUE(m.is_finite());
  EXPECT_NEAR(m.value, kPi / 2.0, 1e-14);
  EXPECT_NEAR(dagum_moment(1, {2.0, 2.0, 1.0}).value, 2.0 * m.value, 1e-14);
  const auto q = moment_by_quadrature([](double x) { return dagum_density(2.0, 1.0, 1.0, x); }, 1);
  EXPECT_NEAR(q.value, kPi / 2.0, 1e-8);
}

TEST(DagumPdf, MatchesDirectDensity) {
  for (double x : {0.01, 0.5, 2.0, 30.0}) {
    EXPECT_NEAR(dagum_pdf({2.5, 1.5, 0.7}, x), dagum_density(2.5, 1.5, 0.7, x), 1e-13);
  }
}

TEST(Gb2Cdf, Examples) {
  EXPECT_NEAR(gb2_cdf({1.0, 1.0, 1.0, 1.0}, 1.0), 0.5, 1e-15);
  EXPECT_EQ(gb2_edge({2.0, 3.0, 1.2, 0.8}, 0.0).cdf, 0.0);
  EXPECT_EQ(gb2_edge({2.0, 3.0, 1.2, 0.8}, kInf).cdf, 1.0);
  EXPECT_EQ(gb2_edge({-2.0, 3.0, 1.2, 0.8}, 0.0).cdf, 0.0);
  EXPECT_EQ(gb2_edge({-2.0, 3.0, 1.2, 0.8}, kInf).cdf, 1.0);

  const auto q =
      integrate([](double x) { return gb2_density(2.0, 3.0, 1.2, 0.8, x); }, 0.0, 3.0);
  EXPECT_NEAR(gb2_cdf({2.0, 3.0, 1.2, 0.8}, 3.0), q.value, 1e-8);
  EXPECT_NEAR(gb2_cdf({2.0, 3.0, 1.2, 0.8}, 3.0), 0.3632631859654294, 1e-13);
  EXPECT_THROW(gb2_cdf({0.0, 3.0, 1.2, 0.8}, 1.0), DomainError);
}

TEST(Gb2Cdf, NegativeAQuadrature) {
  const auto q =
      integrate([](double x) { return gb2_density(-1.5, 2.0, 0.7, 2.5, x); }, 0.0, 1.3);
  EXPECT_NEAR(gb2_cdf({-1.5, 2.0, 0.7, 2.5}, 1.3), q.value, 1e-8);
  EXPECT_NEAR(gb2_pdf({-1.5, 2.0, 0.7, 2.5}, 1.3), gb2_density(-1.5, 2.0, 0.7, 2.5, 1.3), 1e-13);
}

TEST(Gb2Moment, Examples) {
  EXPECT_EQ(gb2_moment(1, {1.0, 1.0, 1.0, 1.0}).kind, MomentValue::Kind::kIndeterminate);
  EXPECT_EQ(gb2_moment(2, {4.0, 1.0, 1.0, 0.5}).kind, MomentValue::Kind::kIndeterminate);
  const MomentValue m = gb2_moment(1, {1.0, 1.0, 1.0, 3.0});
  ASSERT_TRUE(m.is_finite());
  EXPECT_NEAR(m.value, 0.5, 1e-14);
  EXPECT_NEAR(gb2_moment(2, {1.0, 3.0, 1.0, 3.0}).value, 9.0 * gb2_moment(2, {1.0, 1.0, 1.0, 3.0}).value,
              1e-12);
  const auto q =
      moment_by_quadrature([](double x) { return gb2_density(1.0, 1.0, 1.0, 3.0, x); }, 1);
  EXPECT_NEAR(q.value, 0.5, 1e-8);
  // negative a: finite iff -p a < k, i.e. k < p |a|
  EXPECT_EQ(gb2_moment(1, {-1.0, 1.0, 0.8, 2.0}).kind, MomentValue::Kind::kIndeterminate);
  EXPECT_TRUE(gb2_moment(1, {-1.0, 1.0, 1.5, 2.0}).is_finite());
}

TEST(Gb2Moment, HugeShapeP) {
  // p -> inf: Γ(p + r) / Γ(p) = p^r (1 + O(1/p))
  const double a = 0.13, p = 1e30, q = 106.0, r = 1.0 / a;
  const double b = std::exp(-r * std::log(p)) * 9e4;
  const MomentValue m = gb2_moment(1, {a, b, p, q});
  ASSERT_TRUE(m.is_finite());
  const double expected = 9e4 * std::exp(std::lgamma(q - r) - std::lgamma(q));
  EXPECT_NEAR(m.value / expected, 1.0, 1e-10);
}

TEST(Gb2, QEqualsOneIsDagum) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> a(0.5, 6.0), b(0.1, 1e5), p(0.1, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const DagumParams d{a(rng), b(rng), p(rng)};
    const Gb2Params g{d.a, d.b, d.p, 1.0};
    for (int i = 0; i < 50; ++i) {
      const double x = d.b * std::pow(10.0, -3.0 + 6.0 * i / 49.0);
      EXPECT_NEAR(gb2_cdf(g, x), dagum_cdf(d, x), 1e-10);
    }
    for (int k : {1, 2}) {
      const MomentValue md = dagum_moment(k, d), mg = gb2_moment(k, g);
      ASSERT_EQ(md.kind, mg.kind);
      if (md.is_finite()) EXPECT_NEAR(mg.value / md.value, 1.0, 1e-12);
    }
  }
}

TEST(Comparison, MonotoneWithLimits) {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> a(0.3, 8.0), b(0.5, 2e5), pq(0.05, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Gb2Params g{(trial % 2 ? -1.0 : 1.0) * a(rng), b(rng), pq(rng), pq(rng)};
    const DagumParams d{a(rng), b(rng), pq(rng)};
    double last_g = 0.0, last_d = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double x = std::pow(10.0, -4.0 + 14.0 * i / 49.0);
      const EdgeProbability eg = gb2_edge(g, x), ed = dagum_edge(d, x);
      EXPECT_GE(eg.cdf, last_g);
      EXPECT_GE(ed.cdf, last_d);
      EXPECT_NEAR(eg.cdf + eg.sf, 1.0, 1e-12);
      EXPECT_NEAR(ed.cdf + ed.sf, 1.0, 1e-12);
      last_g = eg.cdf;
      last_d = ed.cdf;
    }
  }
}

}  // namespace
}  // namespace binfit
