#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "dicke/params.hpp"

namespace dicke {

struct GroundState {
  DickeParams params;
  Eigen::MatrixXd coeffs;  // (n_cut+1) x (2j+1), indexed (n, m_index)
  double energy = 0.0;
  int parity = 1;
  double residual = 0.0;

  double coeff(int n, int m_index) const { return coeffs(n, m_index); }
};

GroundState ground_state(const DickeParams& p, double tol = 1e-12);

// Reorders and normalizes a full-basis eigenvector into a GroundState with the
// canonical sign (largest |c| positive).
GroundState make_ground_state(const DickeParams& p, const Eigen::VectorXd& full_vector, double energy,
                              double residual);

using GroundStateProvider = std::function<GroundState(const DickeParams&)>;

struct CutoffStep {
  int n_cut = 0;
  double energy = 0.0;
  double delta = 0.0;    // E0(n_cut) - E0(n_cut + step)
  double leakage = 0.0;  // weight of gs(n_cut + step) in rows n > n_cut
  bool chosen = false;
};

struct CutoffResult {
  int n_cut = 0;
  GroundState gs;
  std::vector<CutoffStep> trace;
};

// Smallest n_c in {0, step, 2 step, ...} with |E0(n_c) - E0(n_c + step)| < tol
// and the weight of gs(n_c + step) beyond row n_c below tol.
CutoffResult converge_cutoff(const DickeParams& base, double energy_tol, int n_cut_max, int step = 10,
                             const GroundStateProvider& provider = {});

enum class Space { Position, Momentum };

// Two-oscillator representation of the ground state. Position values are
// real (imaginary part 0). Normalized so that the integral of |psi|^2 is 1.
std::complex<double> numeric_wavefunction(const GroundState& gs, Space space, double x, double y);

}  // namespace dicke
