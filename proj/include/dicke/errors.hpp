#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Invalid user-facing configuration (bad parameters, bad flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not reach its declared accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature box does not contain the density; `axis` names the offender.
class CoverageError : public NumericalError {
 public:
  CoverageError(const std::string& axis, double edge_ratio)
      : NumericalError("quadrature coverage failure on axis " + axis +
                       " (edge/peak ratio " + std::to_string(edge_ratio) + ")"),
        axis_(axis),
        ratio_(edge_ratio) {}
  const std::string& axis() const { return axis_; }
  double ratio() const { return ratio_; }

 private:
  std::string axis_;
  double ratio_;
};

}  // namespace dicke
