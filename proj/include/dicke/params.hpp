#pragma once

#include <cmath>

#include "dicke/errors.hpp"

namespace dicke {

struct DickeParams {
  double omega = 1.0;
  double omega0 = 1.0;
  double lambda = 0.0;
  int two_j = 1;
  int n_cut = 0;

  double j() const { return 0.5 * two_j; }

  // Throws ConfigError when any invariant is violated.
  void validate() const {
    if (!(std::isfinite(omega) && omega > 0.0)) throw ConfigError("omega must be > 0");
    if (!(std::isfinite(omega0) && omega0 > 0.0)) throw ConfigError("omega0 must be > 0");
    if (!(std::isfinite(lambda) && lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    if (two_j < 1) throw ConfigError("two_j must be >= 1");
    if (n_cut < 0) throw ConfigError("n_cut must be >= 0");
  }

  static DickeParams make(double omega, double omega0, double lambda, int two_j, int n_cut) {
    DickeParams p{omega, omega0, lambda, two_j, n_cut};
    p.validate();
    return p;
  }

  DickeParams with_lambda(double l) const {
    DickeParams p = *this;
    p.lambda = l;
    return p;
  }
  DickeParams with_cutoff(int n) const {
    DickeParams p = *this;
    p.n_cut = n;
    return p;
  }
};

inline double critical_coupling(const DickeParams& p) {
  p.validate();
  return 0.5 * std::sqrt(p.omega * p.omega0);
}

inline bool is_superradiant(const DickeParams& p) { return p.lambda >= critical_coupling(p); }

}  // namespace dicke
