#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdb {

enum class ErrorCode {
  InvalidInput = 1,
  Domain = 2,
  Resource = 3,
  Decode = 4,
  Numeric = 5,
};

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorCode::InvalidInput, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t bound)
      : Error(ErrorCode::Resource, what), bound_(bound) {}
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t bound_;
};

/// Decoder gave up. `index` is the offending read/symbol index, `stage` names
/// the pipeline stage ("lsymbol", "marker", "erasure", ...).
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t index, std::string stage = {})
      : Error(ErrorCode::Decode, what), index_(index), stage_(std::move(stage)) {}
  std::size_t index() const noexcept { return index_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::size_t index_;
  std::string stage_;
};

/// Iterative solver hit its cap; carries the best estimate reached.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double estimate)
      : Error(ErrorCode::Numeric, what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace cdb
