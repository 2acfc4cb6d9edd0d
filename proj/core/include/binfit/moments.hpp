#pragma once

#include <string>

namespace binfit {

// A moment that may be finite, infinite, or undefined for the fitted
// parameters. `approximate` marks values from the near-lognormal fallback.
struct MomentValue {
  enum class Kind { kFinite, kPlusInfinity, kIndeterminate };

  Kind kind = Kind::kIndeterminate;
  double value = 0.0;
  bool approximate = false;

  static MomentValue finite(double v, bool approximate = false);
  static MomentValue plus_infinity() { return {Kind::kPlusInfinity, 0.0, false}; }
  static MomentValue indeterminate() { return {Kind::kIndeterminate, 0.0, false}; }

  bool is_finite() const { return kind == Kind::kFinite; }

  friend bool operator==(const MomentValue&, const MomentValue&) = default;
};

// "NA" for undefined, "inf" for +infinity, otherwise the number.
std::string to_string(const MomentValue& m);

struct MomentSummary {
  MomentValue mean;
  MomentValue second_moment;
  MomentValue variance;
  MomentValue sd;
  MomentValue cv;
  // Set when E[X^2] - E[X]^2 came out negative through rounding and was
  // clamped to zero.
  bool variance_clamped = false;

  bool approximate() const { return mean.approximate || second_moment.approximate; }
};

// Derives variance, sd and cv from the first two raw moments, propagating
// infinite and undefined values.
MomentSummary summarize_moments(const MomentValue& m1, const MomentValue& m2);

}  // namespace binfit
