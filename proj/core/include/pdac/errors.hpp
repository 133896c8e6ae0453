#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-sized or otherwise unusable grid geometry.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operands whose shapes (coils, height, width) disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter value: nonpositive weight, bad acceleration, unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Budget schedule violation. Carries the offending schedule index when one
/// exists, npos otherwise.
class ScheduleError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ScheduleError(std::size_t index, const std::string& what)
      : Error("schedule index " + std::to_string(index) + ": " + what), index_(index) {}
  explicit ScheduleError(const std::string& what) : Error(what), index_(npos) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A value that breaks a data invariant (unnormalized sensitivities, empty mask).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A metric that is undefined for its inputs (e.g. all-zero reference).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// File system or format failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdac
