#pragma once

#include <stdexcept>
#include <string>

namespace weakcr {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A parameter lies outside the domain of the operation (negative semigroup
/// parameter, alpha <= 3/4 for the rational weight, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The truncated basis is too small for the requested state.
class TruncationTooSmall : public Error {
public:
  TruncationTooSmall(const std::string& what, double tail_mass)
      : Error(what), tail_mass_(tail_mass) {}
  double tail_mass() const noexcept { return tail_mass_; }

private:
  double tail_mass_;
};

/// Iterated operator applications ran out of the safe band.
class TruncationError : public Error {
public:
  using Error::Error;
};

class NoKernel : public Error {
public:
  NoKernel(const std::string& what, double sigma_min)
      : Error(what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

private:
  double sigma_min_;
};

class NonNormalizable : public Error {
public:
  using Error::Error;
};

class ConditioningError : public Error {
public:
  ConditioningError(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

private:
  double condition_number_;
};

class NotInL2 : public Error {
public:
  NotInL2(const std::string& what, int power) : Error(what), power_(power) {}
  /// The power k whose moment diverges.
  int power() const noexcept { return power_; }

private:
  int power_;
};

class NotAdmissible : public Error {
public:
  using Error::Error;
};

class InconsistentOracle : public Error {
public:
  using Error::Error;
};

class ConstructionError : public Error {
public:
  using Error::Error;
};

class InconsistencyError : public Error {
public:
  using Error::Error;
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        message_(message), line_(line), column_(column) {}
  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  std::string message_;
  int line_;
  int column_;
};

}  // namespace weakcr
