#include "binfit/binned_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <boost/tokenizer.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "binfit/errors.hpp"

namespace binfit {

const char* to_string(ValidationKind kind) {
  switch (kind) {
    case ValidationKind::kNoBins: return "NoBins";
    case ValidationKind::kInvertedBin: return "InvertedBin";
    case ValidationKind::kOverlappingBins: return "OverlappingBins";
    case ValidationKind::kNonContiguousBins: return "NonContiguousBins";
    case ValidationKind::kNegativeCount: return "NegativeCount";
    case ValidationKind::kUnboundedInteriorBin: return "UnboundedInteriorBin";
  }
  return "Unknown";
}

ValidationError::ValidationError(ValidationKind kind, std::size_t bin_index,
                                 const std::string& detail)
    : Error(fmt::format("{} at bin {}: {}", to_string(kind), bin_index, detail)),
      kind_(kind),
      bin_index_(bin_index) {}

ParseError::ParseError(std::size_t line, const std::string& detail)
    : Error(fmt::format("parse error at line {}: {}", line, detail)), line_(line) {}

MissingColumn::MissingColumn(const std::string& column)
    : Error(fmt::format("missing column '{}'", column)) {}

const char* error_kind(const std::exception& e) {
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) return to_string(v->kind());
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const MissingColumn*>(&e)) return "MissingColumn";
  if (dynamic_cast<const IneligibleSample*>(&e)) return "IneligibleSample";
  if (dynamic_cast<const AllGridPointsFailed*>(&e)) return "AllGridPointsFailed";
  if (dynamic_cast<const NoViableCandidate*>(&e)) return "NoViableCandidate";
  if (dynamic_cast<const EmptyInput*>(&e)) return "EmptyInput";
  if (dynamic_cast<const EmptyEstimatorSet*>(&e)) return "EmptyEstimatorSet";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

std::size_t BinnedSample::nonzero_bins() const {
  return static_cast<std::size_t>(std::count_if(
      bins.begin(), bins.end(), [](const Bin& b) { return b.count > 0; }));
}

std::vector<double> BinnedSample::edges() const {
  std::vector<double> out;
  out.reserve(bins.size() + 1);
  for (const auto& b : bins) out.push_back(b.lower);
  if (!bins.empty()) out.push_back(bins.back().upper);
  return out;
}

BinnedSample make_sample(std::string id, std::vector<Bin> bins) {
  BinnedSample s{std::move(id), std::move(bins), 0};
  for (const auto& b : s.bins) s.total += b.count;
  return s;
}

BinnedSample validate(BinnedSample sample) {
  auto& bins = sample.bins;
  if (bins.empty()) throw ValidationError(ValidationKind::kNoBins, 0, "sample has no bins");

  std::stable_sort(bins.begin(), bins.end(),
                   [](const Bin& a, const Bin& b) { return a.lower < b.lower; });

  for (std::size_t i = 0; i < bins.size(); ++i) {
    const Bin& b = bins[i];
    if (!(b.lower >= 0.0) || !(b.lower < b.upper)) {
      throw ValidationError(ValidationKind::kInvertedBin, i,
                            fmt::format("[{}, {}) is not a nonempty interval", b.lower, b.upper));
    }
    if (b.count < 0) {
      throw ValidationError(ValidationKind::kNegativeCount, i,
                            fmt::format("count {}", b.count));
    }
    if (b.unbounded() && i + 1 != bins.size()) {
      throw ValidationError(ValidationKind::kUnboundedInteriorBin, i,
                            "only the last bin may extend to infinity");
    }
    if (i == 0) {
      if (b.lower != 0.0) {
        throw ValidationError(ValidationKind::kNonContiguousBins, 0,
                              fmt::format("first bin starts at {} instead of 0", b.lower));
      }
      continue;
    }
    const double prev_upper = bins[i - 1].upper;
    if (b.lower < prev_upper) {
      throw ValidationError(ValidationKind::kOverlappingBins, i,
                            fmt::format("starts at {} before previous bin ends at {}",
                                        b.lower, prev_upper));
    }
    if (b.lower > prev_upper) {
      throw ValidationError(ValidationKind::kNonContiguousBins, i,
                            fmt::format("gap between {} and {}", prev_upper, b.lower));
    }
  }
  sample.total = std::accumulate(bins.begin(), bins.end(), std::int64_t{0},
                                 [](std::int64_t acc, const Bin& b) { return acc + b.count; });
  return sample;
}

std::int64_t census_round(std::int64_t count) {
  if (count < 0) throw DomainError("census_round: negative count");
  if (count == 0) return 0;
  if (count < 5) return 4;
  return ((count + 2) / 5) * 5;
}

BinnedSample census_round(BinnedSample sample) {
  sample.total = 0;
  for (auto& b : sample.bins) {
    b.count = census_round(b.count);
    sample.total += b.count;
  }
  return sample;
}

bool is_eligible(const BinnedSample& sample, const EligibilityRule& rule) {
  return sample.total >= rule.min_total &&
         static_cast<std::int64_t>(sample.nonzero_bins()) >= rule.min_nonzero_bins;
}

namespace {

using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
  std::string trimmed = line;
  if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
  try {
    Tokenizer tok(trimmed, boost::escaped_list_separator<char>('\\', ',', '"'));
    std::vector<std::string> fields;
    for (const auto& f : tok) fields.push_back(f);
    return fields;
  } catch (const boost::escaped_list_error& e) {
    throw ParseError(line_no, e.what());
  }
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_amount(std::string_view text, std::size_t line_no, const char* what) {
  text = strip(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ParseError(line_no, fmt::format("cannot parse {} value '{}'", what, text));
  }
  return value;
}

double parse_upper(std::string_view text, std::size_t line_no) {
  text = strip(text);
  if (text.empty() || text == "inf" || text == "Inf" || text == "INF") return kInf;
  return parse_amount(text, line_no, "max");
}

std::int64_t parse_count(std::string_view text, std::size_t line_no) {
  text = strip(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return value;
  // Accept integral decimals such as "110.0".
  const double d = parse_amount(text, line_no, "count");
  if (d != std::floor(d)) {
    throw ParseError(line_no, fmt::format("count '{}' is not an integer", text));
  }
  return static_cast<std::int64_t>(d);
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (strip(header[i]) == name) return i;
  }
  throw MissingColumn(name);
}

}  // namespace

std::vector<BinnedSample> read_samples(std::istream& in, const ColumnMap& columns) {
  std::vector<BinnedSample> samples;
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty() || strip(line) == "\r") continue;
    header = split_row(line, line_no);
    break;
  }
  if (header.empty()) return samples;
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  const bool has_id = !columns.id.empty();
  const std::size_t id_col = has_id ? column_index(header, columns.id) : 0;
  const std::size_t min_col = column_index(header, columns.min);
  const std::size_t max_col = column_index(header, columns.max);
  const std::size_t n_col = column_index(header, columns.n);
  const std::size_t needed = std::max({id_col, min_col, max_col, n_col}) + 1;

  std::unordered_map<std::string, std::size_t> by_id;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty() || strip(line) == "\r") continue;
    auto fields = split_row(line, line_no);
    if (fields.size() < needed) {
      // A trailing empty max field may be dropped by some writers.
      if (fields.size() + 1 == needed && max_col + 1 == needed) {
        fields.emplace_back();
      } else {
        throw ParseError(line_no, fmt::format("expected {} fields, found {}", needed, fields.size()));
      }
    }
    const std::string id = has_id ? std::string(strip(fields[id_col])) : std::string();
    auto [it, inserted] = by_id.try_emplace(id, samples.size());
    if (inserted) samples.push_back(BinnedSample{id, {}, 0});
    BinnedSample& s = samples[it->second];
    Bin b;
    b.lower = parse_amount(fields[min_col], line_no, "min");
    b.upper = parse_upper(fields[max_col], line_no);
    b.count = parse_count(fields[n_col], line_no);
    s.bins.push_back(b);
    s.total += b.count;
  }
  for (auto& s : samples) {
    std::stable_sort(s.bins.begin(), s.bins.end(),
                     [](const Bin& a, const Bin& b) { return a.lower < b.lower; });
  }
  return samples;
}

std::vector<BinnedSample> read_samples(const std::string& path, const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path));
  return read_samples(in, columns);
}

namespace {

std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\\") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_samples(std::ostream& out, const std::vector<BinnedSample>& samples,
                   const ColumnMap& columns) {
  const bool has_id = !columns.id.empty();
  if (has_id) fmt::print(out, "{},", columns.id);
  fmt::print(out, "{},{},{}\n", columns.min, columns.max, columns.n);
  for (const auto& s : samples) {
    for (const auto& b : s.bins) {
      if (has_id) fmt::print(out, "{},", quoted(s.id));
      if (b.unbounded()) {
        fmt::print(out, "{},inf,{}\n", b.lower, b.count);
      } else {
        fmt::print(out, "{},{},{}\n", b.lower, b.upper, b.count);
      }
    }
  }
}

std::vector<double> census_2000_edges() {
  return {0,     10000, 15000, 20000,  25000,  30000,  35000,  40000,  45000,
          50000, 60000, 75000, 100000, 125000, 150000, 200000, kInf};
}

namespace {

BinnedSample on_census_edges(std::string id, const std::vector<std::int64_t>& counts) {
  const auto e = census_2000_edges();
  std::vector<Bin> bins;
  for (std::size_t i = 0; i < counts.size(); ++i) bins.push_back({e[i], e[i + 1], counts[i]});
  return make_sample(std::move(id), std::move(bins));
}

}  // namespace

BinnedSample mcnary_2000() {
  return on_census_edges("McNary", {55, 15, 10, 0, 10, 4, 4, 0, 4, 4, 0, 4, 0, 0, 0, 0});
}

BinnedSample rancho_santa_fe_2000() {
  return on_census_edges("Rancho Santa Fe", {45, 40, 50, 25, 25, 55, 20, 30, 20, 55, 85, 135,
                                             175, 100, 155, 910});
}

}  // namespace binfit
