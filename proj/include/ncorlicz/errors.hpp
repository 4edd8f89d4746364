#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncorlicz {

/// Input outside the mathematical domain of an operation (negative argument,
/// non-projection, non-positive element, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shape or bookkeeping mismatch between algebras, elements and morphisms.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// phi(|a|) does not exist because phi is infinite somewhere on the spectrum.
class NotMeasurableError : public std::domain_error {
 public:
  NotMeasurableError(double eigenvalue, std::size_t block)
      : std::domain_error("functional calculus is infinite at eigenvalue " +
                          std::to_string(eigenvalue) + " in block " + std::to_string(block)),
        eigenvalue_(eigenvalue),
        block_(block) {}

  double eigenvalue() const noexcept { return eigenvalue_; }
  std::size_t block() const noexcept { return block_; }

 private:
  double eigenvalue_;
  std::size_t block_;
};

/// The function built does not satisfy the Orlicz axioms.
class InvalidOrliczError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No finite scale makes the modular finite: the element lies outside the space.
class UnboundedNormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document; `where` names the JSON path.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Unknown catalog kind or inconsistent configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ncorlicz
