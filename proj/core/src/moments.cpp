#include "binfit/moments.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace binfit {

MomentValue MomentValue::finite(double v, bool approximate) {
  if (std::isnan(v)) return indeterminate();
  if (v == std::numeric_limits<double>::infinity()) return plus_infinity();
  return {Kind::kFinite, v, approximate};
}

std::string to_string(const MomentValue& m) {
  switch (m.kind) {
    case MomentValue::Kind::kFinite: return fmt::format("{:.10g}", m.value);
    case MomentValue::Kind::kPlusInfinity: return "inf";
    case MomentValue::Kind::kIndeterminate: return "NA";
  }
  return "NA";
}

MomentSummary summarize_moments(const MomentValue& m1, const MomentValue& m2) {
  using Kind = MomentValue::Kind;
  MomentSummary s;
  s.mean = m1;
  s.second_moment = m2;
  const auto na = MomentValue::indeterminate();
  const auto inf = MomentValue::plus_infinity();

  if (m1.kind == Kind::kIndeterminate) {
    s.variance = s.sd = s.cv = na;
    return s;
  }
  if (m1.kind == Kind::kPlusInfinity) {
    // E[(X - c)^2] is infinite for every c; the ratio sd / mean is not defined.
    s.variance = s.sd = inf;
    s.cv = na;
    return s;
  }
  if (m2.kind == Kind::kIndeterminate) {
    s.variance = s.sd = s.cv = na;
    return s;
  }
  if (m2.kind == Kind::kPlusInfinity) {
    s.variance = s.sd = inf;
    s.cv = m1.value > 0.0 ? inf : na;
    return s;
  }

  const bool approx = m1.approximate || m2.approximate;
  double var = m2.value - m1.value * m1.value;
  if (var < 0.0) {
    var = 0.0;
    s.variance_clamped = true;
  }
  s.variance = MomentValue::finite(var, approx);
  s.sd = MomentValue::finite(std::sqrt(var), approx);
  s.cv = m1.value > 0.0 ? MomentValue::finite(std::sqrt(var) / m1.value, approx) : na;
  return s;
}

}  // namespace binfit
