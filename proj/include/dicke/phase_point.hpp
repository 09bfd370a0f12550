#pragma once

#include <complex>

namespace dicke {

struct PhasePointExact {
  std::complex<double> alpha;
  std::complex<double> z;
};

// Contracted two-boson phase-space point: alpha = alpha1 + i alpha2, beta = beta1 + i beta2.
struct PhasePoint {
  double alpha1 = 0.0, alpha2 = 0.0, beta1 = 0.0, beta2 = 0.0;
  std::complex<double> alpha() const { return {alpha1, alpha2}; }
  std::complex<double> beta() const { return {beta1, beta2}; }
};

}  // namespace dicke
