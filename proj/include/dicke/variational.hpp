#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dicke/ground_state.hpp"
#include "dicke/params.hpp"
#include "dicke/phase_point.hpp"
#include "dicke/quadrature.hpp"

namespace dicke {

enum class Phase { Normal, Superradiant };
enum class Branch { Even, Odd };

struct EquilibriumConfig {
  double alpha_e = 0.0;
  double z_e = 0.0;
  double beta_e = 0.0;  // sqrt(2j) z_e
  Phase phase = Phase::Normal;
  double displacement() const { return alpha_e * alpha_e + beta_e * beta_e; }  // alpha_e^2 + beta_e^2
};

// Stationary point of energy_surface: with r = lambda/lambda_c >= 1,
// cos(theta) = r^-2, alpha_e = -(lambda/omega) sqrt(2j) sin(theta), z_e = tan(theta/2).
EquilibriumConfig equilibrium(const DickeParams& p);

double energy_surface(std::complex<double> alpha, std::complex<double> z, const DickeParams& p);

// <alpha, z|H|-alpha, -z>.
double energy_offdiagonal(std::complex<double> alpha, std::complex<double> z, const DickeParams& p);

// N_pm^2 = 2 (1 +- e^{-2|alpha|^2} ((1-|z|^2)/(1+|z|^2))^{2j}).
double cat_norm_squared(std::complex<double> alpha, std::complex<double> z, int two_j, Branch b);

// <alpha,z,pm|H|alpha,z,pm>. Throws std::domain_error when N_pm vanishes.
double energy_surface_pm(std::complex<double> alpha, std::complex<double> z, const DickeParams& p, Branch b);

struct AnsatzState {
  DickeParams params;
  EquilibriumConfig eq;
  Branch branch = Branch::Even;

  // Rejects the odd branch in the normal phase (zero norm).
  static AnsatzState make(const DickeParams& p, Branch b = Branch::Even);
  static AnsatzState make(const DickeParams& p, const EquilibriumConfig& eq, Branch b);
};

double ansatz_husimi_exact(const AnsatzState& st, const PhasePointExact& pt);
double ansatz_husimi_hp(const AnsatzState& st, const PhasePoint& pt);

// Phi_pm as a quadrature density (separable slab evaluation).
class AnsatzHusimi : public PhaseDensity {
 public:
  explicit AnsatzHusimi(AnsatzState st) : st_(std::move(st)) {}
  double value(const PhasePoint& p) const override { return ansatz_husimi_hp(st_, p); }
  PacketLayout layout() const override;
  std::unique_ptr<SlabEvaluator> bind(const ProductGrid& g) const override;
  const AnsatzState& state() const { return st_; }

 private:
  AnsatzState st_;
};

// (1 + sech^2(alpha_e^2 + beta_e^2)) / 8.
double analytic_ipr(const DickeParams& p);

// Closed-form marginals of the even ansatz: kappa = 1 at (alpha1, beta1) = (a, b),
// kappa = 2 at (alpha2, beta2) = (a, b).
double analytic_marginal_husimi(const AnsatzState& st, int kappa, double a, double b);

struct MarginalIpr {
  double P1 = 0.0, P2 = 0.0;
};
MarginalIpr analytic_marginal_ipr(const DickeParams& p);

enum class LimitKind { Joint, Marginal1, Marginal2, Wehrl, Wehrl1, Wehrl2 };
LimitKind parse_limit_kind(const std::string& s);

// Large-j limits of moments and entropies.
double thermo_limit(double nu, Phase phase, LimitKind kind);

// Two-oscillator wavefunction of the even ansatz (position real, momentum complex).
std::complex<double> ansatz_wavefunction(const AnsatzState& st, Space space, double x, double y);

enum class ZeroPlane { Position, Momentum };
std::string zero_plane_name(ZeroPlane z);

// Rectangle [a_lo, a_hi] x [b_lo, b_hi] where a is the alpha component and b the
// beta component of the chosen plane.
struct Cell {
  double a_lo = -1.0, a_hi = 1.0, b_lo = -1.0, b_hi = 1.0;
};

// Line a = slope * b + intercept with its clipped segment inside the cell.
struct ZeroLine {
  ZeroPlane plane = ZeroPlane::Position;
  int l = 0;  // fringe index (0 for the position line)
  double slope = 0.0;
  double intercept = 0.0;
  double seg_a_lo = 0.0, seg_b_lo = 0.0, seg_a_hi = 0.0, seg_b_hi = 0.0;
};

// Zero lines of Phi_+ meeting the cell in a segment of positive length.
std::vector<ZeroLine> husimi_zero_lines(const DickeParams& p, const Cell& cell, ZeroPlane plane);

// A 4D point on the zero set whose projection onto `line.plane` is the point of
// the segment at fraction t in [0, 1].
PhasePoint zero_line_point(const DickeParams& p, const ZeroLine& line, double t);

// Central-difference gradient norm of energy_surface over (Re alpha, Im alpha, Re z, Im z).
double energy_gradient_norm(const DickeParams& p, std::complex<double> alpha, std::complex<double> z, double h);
double equilibrium_gradient_check(const DickeParams& p, double h);

// Optional refinement: minimizes energy_surface_pm over real (alpha, z) by
// coordinate descent with finite-difference derivatives, starting at the
// closed-form equilibrium.
EquilibriumConfig refine_equilibrium(const DickeParams& p, Branch b, double tol = 1e-10, int max_sweeps = 500);

}  // namespace dicke
