#pragma once

#include <Eigen/Dense>

#include "dicke/ground_state.hpp"
#include "dicke/phase_point.hpp"
#include "dicke/quadrature.hpp"

namespace dicke {

// Resonant smearing setup: sigma^2 = 1/(2 omega), omega == omega0 required.
struct SmearingConfig {
  double sigma2 = 0.5;
  double omega = 1.0;
  double sigma() const { return std::sqrt(sigma2); }
};

SmearingConfig make_smearing_config(const DickeParams& p);

struct SmearCoordinates {
  double x = 0.0, y = 0.0, kx = 0.0, ky = 0.0;
};

// alpha1 = x/(2 sigma), alpha2 = sigma kx, beta1 = y/(2 sigma), beta2 = sigma ky.
SmearCoordinates coord_map(const PhasePoint& p, const SmearingConfig& cfg);
PhasePoint coord_unmap(const SmearCoordinates& c, const SmearingConfig& cfg);

// Convolution of h_n h_n' (unit-frequency oscillator functions) with a centered
// Gaussian of variance s2, written as the finite Hermite sum. Log-space
// coefficients, long double accumulation.
double hermite_integral_unit(int n, int n_prime, double u, double s2);
// Same sum with plain double factorials and polynomial Hermite values (small n only).
double hermite_integral_unit_direct(int n, int n_prime, double u, double s2);

// Largest degree for which the closed-form sum is used; above it the table
// routines switch to exact Gauss-Hermite convolution.
constexpr int kClosedFormMaxDegree = 20;

enum class IntegralMethod { Auto, ClosedForm, Quadrature };

// Matrix I_{n,n'}(x) for n, n' in 0..nmax for an oscillator of frequency `freq`
// smeared with variance 1/(2 freq): I(x) = sqrt(freq) I_unit(sqrt(freq) x; 1/2).
Eigen::MatrixXd hermite_integral_table(int nmax, double x, double freq, IntegralMethod m = IntegralMethod::Auto);

// Position-space I_{n,n'}(x) at the configured resonance frequency.
double hermite_integral(int n, int n_prime, double x, const SmearingConfig& cfg);

// Smeared densities of one ground state. Normalized as int xi d^2r = 1 and
// int xi_tilde d^2k/(2 pi)^2 = 1.
class SmearedDensities {
 public:
  SmearedDensities(const GroundState& gs, IntegralMethod m = IntegralMethod::Auto);
  double position(double x, double y) const;
  double momentum(double kx, double ky) const;
  const SmearingConfig& config() const { return cfg_; }

  // Values on a tensor grid, f(i, k) = density(u[i], v[k]).
  Eigen::MatrixXd position_grid(const std::vector<double>& xs, const std::vector<double>& ys) const;
  Eigen::MatrixXd momentum_grid(const std::vector<double>& kxs, const std::vector<double>& kys) const;

 private:
  const GroundState& gs_;
  SmearingConfig cfg_;
  IntegralMethod method_;
  Eigen::MatrixXcd D_;  // (-i)^{n+m_index} c_{n m}
};

double smeared_position_density(const GroundState& gs, double x, double y, const SmearingConfig& cfg);
double smeared_momentum_density(const GroundState& gs, double kx, double ky, const SmearingConfig& cfg);

struct SmearedMeasures {
  double norm_xi = 0.0, norm_xi_tilde = 0.0;
  double P_xi = 0.0, P_xi_tilde = 0.0;
  double W_xi = 0.0, W_xi_tilde = 0.0;  // -int rho ln rho
};

SmearedMeasures smeared_measures(const GroundState& gs, const QuadratureSpec& q = {});

struct MarginalFromSmearing {
  double P1, P2, W1, W2;
};

// Exact inverse relations implied by xi = Phi_1 / (4 pi sigma^2) and
// xi_tilde = 4 pi sigma^2 Phi_2.
MarginalFromSmearing marginals_from_smeared(const SmearedMeasures& m, const SmearingConfig& cfg);

}  // namespace dicke
