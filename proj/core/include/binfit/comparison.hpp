#pragma once

#include "binfit/distributions.hpp"
#include "binfit/moments.hpp"

namespace binfit {

// Dagum: F(x) = (1 + (x/b)^-a)^-p with a, b, p > 0.
struct DagumParams {
  double a = 1.0;
  double b = 1.0;
  double p = 1.0;

  friend bool operator==(const DagumParams&, const DagumParams&) = default;
};

// Generalized beta of the second kind. a may be negative; b, p, q > 0.
// GB2(a, b, p, q = 1) is Dagum(a, b, p).
struct Gb2Params {
  double a = 1.0;
  double b = 1.0;
  double p = 1.0;
  double q = 1.0;

  friend bool operator==(const Gb2Params&, const Gb2Params&) = default;
};

void check(const DagumParams& p);
void check(const Gb2Params& p);

double dagum_cdf(const DagumParams& p, double x);
double dagum_pdf(const DagumParams& p, double x);
EdgeProbability dagum_edge(const DagumParams& p, double x);
// b^k Γ(1 - k/a) Γ(k/a + p) / Γ(p) when k < a, otherwise Indeterminate.
MomentValue dagum_moment(int k, const DagumParams& p);

double gb2_cdf(const Gb2Params& p, double x);
double gb2_pdf(const Gb2Params& p, double x);
EdgeProbability gb2_edge(const Gb2Params& p, double x);
// b^k B(p + k/a, q - k/a) / B(p, q) when both beta arguments are positive
// (-p a < k < q a), otherwise Indeterminate.
MomentValue gb2_moment(int k, const Gb2Params& p);

}  // namespace binfit
