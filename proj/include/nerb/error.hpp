#pragma once

#include <stdexcept>
#include <string>

namespace nerb {

// Thrown when a statistic is mathematically undefined on the given input
// (e.g. degree assortativity of a regular graph).
class UndefinedStatistic : public std::runtime_error {
 public:
  explicit UndefinedStatistic(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when loaded data fails a validation gate (expected statistics,
// checksum, malformed input).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nerb
