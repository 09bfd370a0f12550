#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dicke/quadrature.hpp"

namespace dicke {

enum class Channel { Numeric, Variational };
std::string channel_name(Channel c);
Channel parse_channel(const std::string& s);

inline const std::vector<double> kDefaultNus = {0.5, 1.5, 2.0, 3.0, 4.0};

struct RenyiEntry {
  double nu = 0.0;
  double moment = 0.0;   // M_nu
  double entropy = 0.0;  // W_nu = ln(M_nu) / (1 - nu)
};

struct MarginalMeasures {
  double norm = 0.0;
  double P = 0.0;
  double W = 0.0;
  std::vector<RenyiEntry> renyi;
};

struct MeasureReport {
  Channel channel = Channel::Numeric;
  double lambda = 0.0;
  int two_j = 0;
  int n_cut = 0;
  double norm = 0.0;
  double P = 0.0;
  double W = 0.0;
  std::vector<RenyiEntry> renyi;
  double P1 = 0.0, P2 = 0.0, W1 = 0.0, W2 = 0.0;
  MarginalMeasures marginal1, marginal2;
  QuadratureSpec quad;  // the spec actually used (after any coverage retry)

  double moment(double nu) const;  // throws if nu was not computed
};

struct MeasureOptions {
  double coverage_ratio = 1e-12;  // largest tolerated edge/peak ratio
  int coverage_retries = 3;       // box widenings before giving up
  int threads = 0;
};

// Runs the single 4D pass, widening the box while the coverage test fails, then
// applies the norm gate. All measures of one density come from one pass.
GridIntegrals integrate_checked(const PhaseDensity& phi, const QuadratureSpec& q, std::span<const double> nus,
                                const MeasureOptions& opt = {}, QuadratureSpec* used = nullptr);

// Full report (joint and marginal measures). The nu list must not contain 1.
MeasureReport measure_report(const PhaseDensity& phi, const QuadratureSpec& q, std::span<const double> nus,
                             const MeasureOptions& opt = {});

double moment_nu(const PhaseDensity& phi, double nu, const QuadratureSpec& q);
double participation_ratio(const PhaseDensity& phi, const QuadratureSpec& q);
double renyi_wehrl(const PhaseDensity& phi, double nu, const QuadratureSpec& q);
double wehrl_entropy(const PhaseDensity& phi, const QuadratureSpec& q);

// Phi_kappa(a, b): kappa = 1 integrates (alpha2, beta2) at (alpha1, beta1) = (a, b);
// kappa = 2 integrates (alpha1, beta1) at (alpha2, beta2) = (a, b). Measure d^2/pi.
double marginal_husimi(const PhaseDensity& phi, int kappa, double a, double b, const QuadratureSpec& q);

MarginalMeasures marginal_measures(const PhaseDensity& phi, int kappa, const QuadratureSpec& q,
                                   std::span<const double> nus);

// (P - P1 P2, W - W1 - W2).
std::pair<double, double> factorization_gap(const MeasureReport& r);

// Measures of a sampled 2D marginal on axis rules (ra, rb) with measure d^2/pi.
MarginalMeasures marginal_from_samples(const Eigen::MatrixXd& f, const AxisRule& ra, const AxisRule& rb,
                                       std::span<const double> nus);

}  // namespace dicke
