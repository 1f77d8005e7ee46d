#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace siov {

/// Base class for every error thrown by the simulator.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// engine
class PastEventError : public SimError {
 public:
  using SimError::SimError;
};
class HandlerMissingError : public SimError {
 public:
  using SimError::SimError;
};
class NonPositiveRateError : public SimError {
 public:
  using SimError::SimError;
};

// parsers (trace / TLE / config / CSV). `location` is a 1-based line or row.
class ParseError : public SimError {
 public:
  ParseError(const std::string& msg, std::size_t location)
      : SimError(msg + " (line " + std::to_string(location) + ")"), location_(location) {}
  std::size_t location() const { return location_; }

 private:
  std::size_t location_;
};

class NonMonotoneTimeError : public SimError {
 public:
  using SimError::SimError;
};
class DuplicateStateError : public SimError {
 public:
  using SimError::SimError;
};
class OutOfRangeError : public SimError {
 public:
  using SimError::SimError;
};
class ZoneOverlapError : public SimError {
 public:
  using SimError::SimError;
};

class ChecksumError : public SimError {
 public:
  using SimError::SimError;
};
class FormatError : public SimError {
 public:
  using SimError::SimError;
};

class NoFeasibleActionError : public SimError {
 public:
  using SimError::SimError;
};
class IncompleteMessageError : public SimError {
 public:
  using SimError::SimError;
};
class ZeroLatencyError : public SimError {
 public:
  using SimError::SimError;
};
class IoError : public SimError {
 public:
  using SimError::SimError;
};

/// Aggregates every violated field so a bad config is reported in one pass.
class ValidationError : public SimError {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : SimError(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& s : issues) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> issues_;
};

class UnknownKeyError : public SimError {
 public:
  explicit UnknownKeyError(std::vector<std::string> keys)
      : SimError(join(keys)), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  static std::string join(const std::vector<std::string>& keys) {
    std::string out = "unknown configuration key(s):";
    for (const auto& k : keys) out += " " + k;
    return out;
  }
  std::vector<std::string> keys_;
};

}  // namespace siov
