#pragma once

#include <stdexcept>
#include <string>

namespace rpm {

/// Precondition violated by the caller (bad width, out-of-range index, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative or dense numerical routine did not reach its tolerance.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Requested problem size exceeds what exact enumeration supports.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rpm

namespace rpm {

/// Homotopy continuation of Bethe roots lost track of the solution branch.
class ContinuationFailure : public NumericFailure {
 public:
  ContinuationFailure(const std::string& what, double residual, double last_delta, double last_t)
      : NumericFailure(what + " (last good Delta " + std::to_string(last_delta) + ", twist fraction " +
                           std::to_string(last_t) + ")",
                       residual),
        last_delta_(last_delta),
        last_t_(last_t) {}

  double last_delta() const noexcept { return last_delta_; }
  double last_twist_fraction() const noexcept { return last_t_; }

 private:
  double last_delta_;
  double last_t_;
};

}  // namespace rpm
