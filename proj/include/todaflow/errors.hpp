#pragma once

#include <stdexcept>
#include <string>

namespace todaflow {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller misuse: wrong order, unknown selector, malformed option.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The O(hbar^2) thermal expansion has left its domain (Z_ST <= 0).
class ValidityError : public DomainError {
 public:
  ValidityError(const std::string& what, double beta_max)
      : DomainError(what), beta_max_(beta_max) {}
  double beta_max() const noexcept { return beta_max_; }

 private:
  double beta_max_;
};

/// A numerical procedure did not reach its tolerance. Carries the best
/// estimate available when it gave up.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, double best_estimate = 0.0,
                            double error_bound = 0.0)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace todaflow
