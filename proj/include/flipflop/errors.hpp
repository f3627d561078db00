#pragma once

#include <stdexcept>
#include <string>

namespace flipflop {

// Invalid user input: parameters out of range, malformed configs.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Orbital and spin splittings too close for the perturbative series.
class DegenerateRegimeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DesignError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace flipflop
