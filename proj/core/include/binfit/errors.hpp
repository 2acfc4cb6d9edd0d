#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace binfit {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

enum class ValidationKind {
  kNoBins,
  kInvertedBin,
  kOverlappingBins,
  kNonContiguousBins,
  kNegativeCount,
  kUnboundedInteriorBin,
};

const char* to_string(ValidationKind kind);

// A BinnedSample that breaks one of its structural invariants.
class ValidationError : public Error {
 public:
  ValidationError(ValidationKind kind, std::size_t bin_index,
                  const std::string& detail);

  ValidationKind kind() const { return kind_; }
  std::size_t bin_index() const { return bin_index_; }

 private:
  ValidationKind kind_;
  std::size_t bin_index_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(const std::string& column);
};

class IneligibleSample : public Error {
 public:
  using Error::Error;
};

class AllGridPointsFailed : public Error {
 public:
  using Error::Error;
};

class NoViableCandidate : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class EmptyEstimatorSet : public Error {
 public:
  using Error::Error;
};

// Short name of an exception's type ("IneligibleSample", "OverlappingBins",
// ...) for reports; "Error" for anything else.
const char* error_kind(const std::exception& e);

}  // namespace binfit
