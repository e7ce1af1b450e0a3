#pragma once

#include <stdexcept>
#include <string>

namespace qlearndyn {

/// Input outside the mathematical domain of an operation (non-interior point,
/// non-simplex vector, a < 4 for the symmetric critical curve, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Analytic operations are defined for 2x2 games only.
class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// |a~| or |c~| below the degeneracy threshold.
class DegenerateGame : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation's applicability region does not contain the input.
class NotApplicable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge; carries the residual it reached.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace qlearndyn
