#include "binfit/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "binfit/errors.hpp"

namespace binfit {

namespace {

// Kronrod 15-point abscissae and weights, with the embedded Gauss 7-point
// weights on the odd abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct Segment {
  Integrand f;
  double a, b;
  int pieces;
};

QuadratureResult integrate_segments(const std::vector<Segment>& segments,
                                    const QuadratureSpec& spec) {
  check(spec);
  struct Item {
    Panel panel;
    std::size_t segment;
    bool operator<(const Item& o) const { return panel < o.panel; }
  };
  std::priority_queue<Item> heap;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const double width = (seg.b - seg.a) / seg.pieces;
    for (int i = 0; i < seg.pieces; ++i) {
      const double lo = seg.a + i * width;
      const double hi = (i + 1 == seg.pieces) ? seg.b : lo + width;
      const Panel p = gauss_kronrod(seg.f, lo, hi);
      total += p.value;
      total_error += p.error;
      heap.push({p, s});
    }
  }

  QuadratureResult result;
  auto done = [&] {
    return total_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };
  while (!done()) {
    if (!std::isfinite(total) || !std::isfinite(total_error)) break;
    if (result.subdivisions >= spec.max_subdivisions) break;
    const Item worst = heap.top();
    const double mid = 0.5 * (worst.panel.a + worst.panel.b);
    if (!(mid > worst.panel.a && mid < worst.panel.b) ||
        (worst.panel.b - worst.panel.a) < 1e3 * std::numeric_limits<double>::min()) {
      break;  // the interval cannot be split any further
    }
    heap.pop();
    const auto& f = segments[worst.segment].f;
    const Panel left = gauss_kronrod(f, worst.panel.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.panel.b);
    total += left.value + right.value - worst.panel.value;
    total_error += left.error + right.error - worst.panel.error;
    heap.push({left, worst.segment});
    heap.push({right, worst.segment});
    ++result.subdivisions;
  }
  // Re-sum to shed accumulated rounding from the incremental updates.
  double value = 0.0, error = 0.0;
  while (!heap.empty()) {
    value += heap.top().panel.value;
    error += heap.top().panel.error;
    heap.pop();
  }
  result.value = value;
  result.abs_error = error;
  result.converged = std::isfinite(value) && std::isfinite(error) &&
                     error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  return result;
}

}  // namespace

void check(const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1) {
    throw DomainError("QuadratureSpec: tolerances must be positive and max_subdivisions >= 1");
  }
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: need finite a < b");
  }
  return integrate_segments({{f, a, b, 1}}, spec);
}

QuadratureResult moment_by_quadrature(const Integrand& density, int k, const QuadratureSpec& spec,
                                      double split) {
  return moment_by_quadrature_log(
      [&density](double x) {
        const double f = density(x);
        return f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity();
      },
      k, spec, split);
}

QuadratureResult moment_by_quadrature_log(const Integrand& log_density, int k,
                                          const QuadratureSpec& spec, double split) {
  check(spec);
  if (!(split > 0.0) || !std::isfinite(split)) {
    throw DomainError("moment_by_quadrature: split point must be positive");
  }
  const double log_split = std::log(split);
  Integrand lower = [&log_density, k](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(k * std::log(x) + log_density(x));
  };
  // Above the split, x = split e^s and the integrand is x^(k+1) f(x) in s.
  auto log_h = [&log_density, k, log_split](double s) {
    const double lx = log_split + s;
    return (k + 1) * lx + log_density(std::exp(lx));
  };
  Integrand upper = [&log_h](double s) { return std::exp(log_h(s)); };

  // A power-law tail is e^(-e s) in s. The cut moves out until the local
  // exponent e settles; past it the rest is h(S) / e, and e <= kTailMargin
  // means the moment diverges.
  constexpr double kTailMargin = 1e-6;
  constexpr double kStep = 40.0;
  const double s_max = std::log(std::numeric_limits<double>::max()) - log_split - 4.0;
  if (!(s_max > kStep)) throw DomainError("moment_by_quadrature: split point too large");
  double cut = kStep;
  double rate = 0.0, drift = 0.0, h_cut = 0.0;
  for (;; cut = std::min(cut + kStep, s_max)) {
    const double l0 = log_h(cut), l1 = log_h(cut + 1.0), l2 = log_h(cut + 2.0);
    if (l0 == -std::numeric_limits<double>::infinity()) {
      h_cut = 0.0;
      break;
    }
    h_cut = std::exp(l0);
    rate = l1 - l2;
    drift = std::abs((l0 - l1) - rate);
    if (rate > 50.0) break;  // the rest is below e^-50 h(S)
    if (drift <= spec.rel_tol * std::max(rate, kTailMargin) || cut >= s_max) break;
  }
  if (h_cut > 0.0 && !(rate > kTailMargin)) {
    QuadratureResult r;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }

  const int pieces = std::max(16, static_cast<int>(std::ceil(cut / 2.0)));
  QuadratureResult r = integrate_segments({{lower, 0.0, split, 16}, {upper, 0.0, cut, pieces}}, spec);
  if (h_cut > 0.0) {
    const double rest = h_cut / rate;
    r.value += rest;
    r.abs_error += rest * drift / rate;
  }
  r.converged = std::isfinite(r.value) && std::isfinite(r.abs_error) &&
                r.abs_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
  return r;
}

}  // namespace binfit
