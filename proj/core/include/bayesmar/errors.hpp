#pragma once

#include <stdexcept>
#include <string>

namespace bayesmar {

// Error categories. The CLI maps these onto exit codes, so keep the
// hierarchy shallow: config (2), data (3), numeric (4).

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few observations for the requested order / window.
class LengthError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t row)
      : DataError(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside the support of a density (non-positive scale, etc.).
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

// The series is fit exactly (S(beta) = 0), so the marginal posterior is
// improper and MCMC cannot proceed.
class DegenerateDataError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RankError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace bayesmar
