#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace binfit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One half-open income interval [lower, upper) and the number of units in it.
struct Bin {
  double lower = 0.0;
  double upper = kInf;
  std::int64_t count = 0;

  bool unbounded() const { return upper == kInf; }
  friend bool operator==(const Bin&, const Bin&) = default;
};

// The binned observations for one unit (a district, a country, ...).
// `total` caches the sum of counts; validate() recomputes it.
struct BinnedSample {
  std::string id;
  std::vector<Bin> bins;
  std::int64_t total = 0;

  std::size_t nonzero_bins() const;
  // Bin edges m_1, M_1 = m_2, ..., M_B for a contiguous sample (B + 1 values).
  std::vector<double> edges() const;

  friend bool operator==(const BinnedSample&, const BinnedSample&) = default;
};

// Builds a sample and fills in `total`; does not validate.
BinnedSample make_sample(std::string id, std::vector<Bin> bins);

struct EligibilityRule {
  std::int64_t min_total = 40;
  std::int64_t min_nonzero_bins = 4;
};

// Sorts bins by lower bound and checks every structural invariant: the first
// bin starts at 0, bins are contiguous, counts are nonnegative and only the
// last bin may be unbounded. Throws ValidationError naming the offending bin.
BinnedSample validate(BinnedSample sample);

// Census disclosure rounding: 0 stays 0, 1..4 become 4, anything else goes to
// the nearest multiple of 5.
std::int64_t census_round(std::int64_t count);
BinnedSample census_round(BinnedSample sample);

bool is_eligible(const BinnedSample& sample, const EligibilityRule& rule = {});

// Column names in a delimited file. An empty `id` means the whole file is a
// single unit.
struct ColumnMap {
  std::string id;
  std::string min = "min";
  std::string max = "max";
  std::string n = "n";
};

// Reads comma-separated rows (header first) into one sample per distinct id,
// in order of first appearance. An empty max field or "inf"/"Inf" marks the
// unbounded top bin. Samples are returned with bins sorted but not validated.
std::vector<BinnedSample> read_samples(std::istream& in, const ColumnMap& columns);
std::vector<BinnedSample> read_samples(const std::string& path,
                                       const ColumnMap& columns);

void write_samples(std::ostream& out, const std::vector<BinnedSample>& samples,
                   const ColumnMap& columns);

// The sixteen-bin household income scheme of the 2000 census.
std::vector<double> census_2000_edges();

// Two example districts from the 2000 census (McNary, AZ and Rancho Santa Fe,
// CA), both on census_2000_edges().
BinnedSample mcnary_2000();
BinnedSample rancho_santa_fe_2000();

}  // namespace binfit
