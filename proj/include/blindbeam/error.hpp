#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blindbeam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two containers that must agree in length do not.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t actual)
      : Error(what + ": expected length " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// A conditional-sample-mean group G(n,k) received no samples.
class EmptyGroupError : public Error {
 public:
  EmptyGroupError(std::size_t element, unsigned phase, std::size_t samples);

  std::size_t element() const noexcept { return element_; }
  unsigned phase() const noexcept { return phase_; }

 private:
  std::size_t element_;
  unsigned phase_;
};

/// An experiment configuration field is missing or invalid.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace blindbeam
