#include "dicke/special.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dicke {

double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(n + 1.0);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::domain_error("log_binomial: k outside [0, n]");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace {

template <class T>
std::vector<T> hermite_functions_impl(int nmax, T x) {
  if (nmax < 0) throw std::domain_error("hermite_functions: negative degree");
  using std::exp;
  using std::log;
  using std::sqrt;
  using std::abs;
  std::vector<T> out(nmax + 1);
  // Run the recurrence on scaled values p_n = h_n * exp(-shift); shift absorbs
  // both the Gaussian seed and any later rescaling.
  T shift = -x * x / 2 - log(std::numbers::pi_v<T>) / 4;
  std::vector<T> shifts(nmax + 1);
  T prev = 0, cur = 1;
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) {
      T next = sqrt(T(2) / n) * x * cur - sqrt(T(n - 1) / n) * prev;
      prev = cur;
      cur = next;
    }
    T mag = abs(cur);
    if (mag > T(1e150)) {
      T s = log(mag);
      cur /= mag;
      prev /= mag;
      shift += s;
    }
    out[n] = cur;
    shifts[n] = shift;
  }
  for (int n = 0; n <= nmax; ++n) {
    if (out[n] == 0) continue;
    T lg = log(abs(out[n])) + shifts[n];
    out[n] = (out[n] < 0 ? -1 : 1) * exp(lg);
  }
  return out;
}

}  // namespace

std::vector<double> hermite_functions(int nmax, double x) { return hermite_functions_impl<double>(nmax, x); }

std::vector<long double> hermite_functions_ld(int nmax, long double x) {
  return hermite_functions_impl<long double>(nmax, x);
}

std::vector<double> hermite_polynomials(int nmax, double x) {
  if (nmax < 0) throw std::domain_error("hermite_polynomials: negative degree");
  std::vector<double> h(nmax + 1);
  h[0] = 1.0;
  if (nmax >= 1) h[1] = 2.0 * x;
  for (int n = 1; n < nmax; ++n) h[n + 1] = 2.0 * x * h[n] - 2.0 * n * h[n - 1];
  return h;
}

namespace {

QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigensolve failed");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  // Enforce exact reflection symmetry of the symmetric weight functions.
  for (int i = 0; i < n / 2; ++i) {
    double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    double w = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::domain_error("gauss_hermite: n must be >= 1");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd e(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) e(k - 1) = std::sqrt(0.5 * k);
  return golub_welsch(d, e, std::sqrt(std::numbers::pi));
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd e(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) e(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(d, e, 2.0);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

}  // namespace dicke
