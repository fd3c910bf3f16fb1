#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfchaos {

/// Base class of every error raised by the library. The message is prefixed
/// with the originating module, e.g. "ot_core: ...".
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class DimError : public Error {
 public:
  using Error::Error;
};

/// Raised when an exact oracle is asked to solve an instance beyond its scale.
class ScaleError : public Error {
 public:
  using Error::Error;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

class MatrixError : public Error {
 public:
  using Error::Error;
};

class EmptyMeasureError : public Error {
 public:
  using Error::Error;
};

class ModelKindError : public Error {
 public:
  using Error::Error;
};

class CurveCoverageError : public Error {
 public:
  using Error::Error;
};

/// A state became non-finite (or absurdly large) during time stepping.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step, double time)
      : Error(what), step_(step), time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

/// Picard iteration failed to reach its tolerance; carries the residual history.
class NonContractionError : public Error {
 public:
  NonContractionError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Configuration errors; field() names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field) : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnknownKey : public ConfigError {
 public:
  explicit UnknownKey(const std::string& key) : ConfigError("config: unknown key '" + key + "'", key) {}
};

class MissingField : public ConfigError {
 public:
  explicit MissingField(const std::string& key) : ConfigError("config: missing field '" + key + "'", key) {}
};

class RangeError : public ConfigError {
 public:
  RangeError(const std::string& key, const std::string& why)
      : ConfigError("config: '" + key + "' out of range: " + why, key) {}
};

}  // namespace mfchaos
