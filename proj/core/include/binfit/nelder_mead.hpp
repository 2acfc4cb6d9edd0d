#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace binfit {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double x_tol = 1e-8;  // simplex extent, infinity norm
  double f_tol = 1e-8;  // spread of objective values over the simplex
};

enum class SearchStatus {
  kConverged,
  kStalled,        // objective settled, simplex still wider than x_tol
  kMaxIterations,  // objective still moving when the budget ran out
};

struct SearchResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  SearchStatus status = SearchStatus::kMaxIterations;
};

// Objective to minimize; may return +inf for infeasible points.
using Objective = std::function<double(const std::vector<double>&)>;

// Adaptive Nelder-Mead simplex search (dimension-dependent coefficients). The
// initial simplex is x0 plus step[i] along each axis. The returned point is
// never worse than x0.
SearchResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                         const std::vector<double>& step, const NelderMeadOptions& options = {});

// Reruns the search `restarts` times from the incumbent's point with freshly
// drawn, randomly scaled simplices, keeping the best point seen. Iteration and
// evaluation counts accumulate. Deterministic for a given seed.
SearchResult restart_search(const Objective& f, SearchResult incumbent,
                            const std::vector<double>& step, int restarts, std::uint64_t seed,
                            const NelderMeadOptions& options = {});

// Runs nelder_mead, then `restarts` more times from the incumbent with freshly
// drawn, randomly scaled simplices. Deterministic for a given seed.
SearchResult nelder_mead_restarts(const Objective& f, const std::vector<double>& x0,
                                  const std::vector<double>& step, int restarts,
                                  std::uint64_t seed, const NelderMeadOptions& options = {});

}  // namespace binfit
