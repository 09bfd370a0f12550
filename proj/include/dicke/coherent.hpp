#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dicke/ground_state.hpp"
#include "dicke/phase_point.hpp"
#include "dicke/quadrature.hpp"

namespace dicke {

// <n|alpha> = e^{-|alpha|^2/2} alpha^n / sqrt(n!), evaluated in log-magnitude/phase form.
std::complex<double> glauber_amplitude(int n, std::complex<double> alpha);

// <j,m|z> = sqrt(C(2j, m_index)) z^{m_index} (1+|z|^2)^{-j}.
std::complex<double> spin_amplitude(int m_index, std::complex<double> z, int two_j);

// All amplitudes 0..nmax by a rescaled recurrence (no overflow for large n or |alpha|).
void glauber_amplitudes(int nmax, std::complex<double> alpha, std::span<std::complex<double>> out);
void spin_amplitudes(int two_j, std::complex<double> z, std::span<std::complex<double>> out);

// Exact Husimi |<alpha, z|psi>|^2.
double husimi_exact(const GroundState& gs, const PhasePointExact& p);

// Contracted Husimi Phi(alpha, beta) with |j,m> identified with the Fock state |m+j>.
double husimi_hp(const GroundState& gs, const PhasePoint& p);

// Phi(alpha, beta) of a numerically diagonalized ground state as a quadrature density.
class NumericHusimi : public PhaseDensity {
 public:
  explicit NumericHusimi(GroundState gs);
  double value(const PhasePoint& p) const override;
  PacketLayout layout() const override;
  std::unique_ptr<SlabEvaluator> bind(const ProductGrid& g) const override;
  const GroundState& state() const { return gs_; }

 private:
  GroundState gs_;
};

// int Phi d^2alpha d^2beta / pi^2. Throws NumericalError naming the likely cause
// (domain or node count) when the result misses 1 by more than q.target_tol.
double check_normalization(const GroundState& gs, const QuadratureSpec& q);

// (2j+1)/pi^2 int Psi(alpha, z) d^2alpha d^2z / (1+|z|^2)^2. The sphere part is
// integrated exactly (Gauss-Legendre in cos(theta), trapezoid in phi); the field
// plane uses the axis rules of `q`.
double exact_husimi_normalization(const GroundState& gs, const QuadratureSpec& q);

}  // namespace dicke
