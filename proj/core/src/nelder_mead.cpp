#include "binfit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "binfit/errors.hpp"

namespace binfit {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double sanitize(double v) {
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

}  // namespace

SearchResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                         const std::vector<double>& step, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || step.size() != n) throw DomainError("nelder_mead: dimension mismatch");

  const double dim = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dim;          // expansion
  const double gamma = 0.75 - 1.0 / (2.0 * dim);  // contraction
  const double delta = 1.0 - 1.0 / dim;          // shrink
  // A one-dimensional shrink of 0 would collapse the simplex.
  const double shrink = n == 1 ? 0.5 : delta;

  SearchResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return sanitize(f(x));
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, eval(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += step[i];
    simplex.push_back({x, eval(x)});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  std::vector<double> centroid(n), trial(n);
  auto along = [&](double t) {
    // centroid + t (centroid - worst)
    const auto& worst = simplex.back().x;
    for (std::size_t j = 0; j < n; ++j) trial[j] = centroid[j] + t * (centroid[j] - worst[j]);
    return trial;
  };

  result.status = SearchStatus::kMaxIterations;
  for (;;) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const double f_best = simplex.front().f;
    const double f_worst = simplex.back().f;
    double extent = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        extent = std::max(extent, std::abs(simplex[i].x[j] - simplex[0].x[j]));
      }
    }
    const bool f_settled = std::isfinite(f_worst) && (f_worst - f_best) <= options.f_tol;
    if (f_settled && extent <= options.x_tol) {
      result.status = SearchStatus::kConverged;
      break;
    }
    if (result.iterations >= options.max_iterations) {
      result.status = f_settled ? SearchStatus::kStalled : SearchStatus::kMaxIterations;
      break;
    }
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
    }
    for (auto& c : centroid) c /= dim;

    const auto reflected = along(alpha);
    const double f_reflected = eval(reflected);
    const double f_second_worst = simplex[n - 1].f;

    if (f_reflected < f_best) {
      const auto expanded = along(alpha * beta);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex.back() = {expanded, f_expanded};
      } else {
        simplex.back() = {reflected, f_reflected};
      }
      continue;
    }
    if (f_reflected < f_second_worst) {
      simplex.back() = {reflected, f_reflected};
      continue;
    }
    if (f_reflected < f_worst) {
      const auto outside = along(alpha * gamma);
      const double f_outside = eval(outside);
      if (f_outside <= f_reflected) {
        simplex.back() = {outside, f_outside};
        continue;
      }
    } else {
      const auto inside = along(-gamma);
      const double f_inside = eval(inside);
      if (f_inside < f_worst) {
        simplex.back() = {inside, f_inside};
        continue;
      }
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i].x[j] = simplex[0].x[j] + shrink * (simplex[i].x[j] - simplex[0].x[j]);
      }
      simplex[i].f = eval(simplex[i].x);
    }
  }
  result.x = simplex.front().x;
  result.value = simplex.front().f;
  return result;
}

SearchResult restart_search(const Objective& f, SearchResult incumbent,
                            const std::vector<double>& step, int restarts, std::uint64_t seed,
                            const NelderMeadOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> s(step.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      s[j] = step[j] * scale(rng) * (flip(rng) ? -1.0 : 1.0);
    }
    SearchResult next = nelder_mead(f, incumbent.x, s, options);
    const int iterations = incumbent.iterations + next.iterations;
    const int evaluations = incumbent.evaluations + next.evaluations;
    if (next.value <= incumbent.value) incumbent = std::move(next);
    incumbent.iterations = iterations;
    incumbent.evaluations = evaluations;
  }
  return incumbent;
}

SearchResult nelder_mead_restarts(const Objective& f, const std::vector<double>& x0,
                                  const std::vector<double>& step, int restarts,
                                  std::uint64_t seed, const NelderMeadOptions& options) {
  return restart_search(f, nelder_mead(f, x0, step, options), step, restarts, seed, options);
}

}  // namespace binfit
