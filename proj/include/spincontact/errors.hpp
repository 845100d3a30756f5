#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spincontact {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: out-of-range index, wrong dimension, non-Hermitian input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A Y-operator denominator 2ik - h (or ik - G) is singular.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, double collision_distance)
      : Error(what), collision_distance_(collision_distance) {}
  double collision_distance() const noexcept { return collision_distance_; }

 private:
  double collision_distance_;
};

/// Two propagation paths reached the same permutation with different vectors.
class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, std::string permutation,
                     std::string first_parent, std::string second_parent,
                     double discrepancy)
      : Error(what),
        permutation_(std::move(permutation)),
        first_parent_(std::move(first_parent)),
        second_parent_(std::move(second_parent)),
        discrepancy_(discrepancy) {}

  const std::string& permutation() const noexcept { return permutation_; }
  const std::string& first_parent() const noexcept { return first_parent_; }
  const std::string& second_parent() const noexcept { return second_parent_; }
  double discrepancy() const noexcept { return discrepancy_; }

 private:
  std::string permutation_;
  std::string first_parent_;
  std::string second_parent_;
  double discrepancy_;
};

/// Evaluation point lies on a coincidence hyperplane x_i = x_j.
class HyperplaneError : public Error {
 public:
  using Error::Error;
};

/// Model-file syntax error with 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace spincontact
