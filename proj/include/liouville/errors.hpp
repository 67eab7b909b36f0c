#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (dim < 4, hbar <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A dense factorization failed to converge or produced unusable output.
class NumericalBreakdown : public Error {
 public:
  NumericalBreakdown(std::string generator_id, const std::string& what)
      : Error(generator_id.empty() ? what : what + " [generator " + generator_id + "]"),
        generator_id_(std::move(generator_id)) {}

  const std::string& generator_id() const noexcept { return generator_id_; }

 private:
  std::string generator_id_;
};

/// Malformed or invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liouville
