#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace dicke {

double log_factorial(int n);
double log_binomial(int n, int k);

// Normalized oscillator eigenfunctions h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)),
// n = 0..nmax, via the three-term recurrence with running rescaling so that
// large |x| does not underflow the seed.
std::vector<double> hermite_functions(int nmax, double x);
std::vector<long double> hermite_functions_ld(int nmax, long double x);

// Physicists' Hermite polynomials H_0..H_nmax by plain recurrence.
std::vector<double> hermite_polynomials(int nmax, double x);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Hermite rule for weight e^{-x^2} (Golub-Welsch).
QuadratureRule gauss_hermite(int n);
// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> v);

// Neumaier compensated accumulator.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace dicke
