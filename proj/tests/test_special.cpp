#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dicke/special.hpp"
#include "oracles.hpp"

using namespace dicke;

TEST_CASE("log factorial and binomial match direct products") {
  for (int n = 0; n <= 20; ++n) {
    CHECK(log_factorial(n) == doctest::Approx(std::log(oracle::factorial(n))).epsilon(1e-14));
    for (int k = 0; k <= n; ++k) {
      double b = oracle::factorial(n) / (oracle::factorial(k) * oracle::factorial(n - k));
      CHECK(std::exp(log_binomial(n, k)) == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("hermite functions agree with the polynomial formula at low order") {
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    auto h = hermite_functions(12, x);
    auto H = hermite_polynomials(12, x);
    for (int n = 0; n <= 12; ++n) {
      double ref = H[n] * std::exp(-0.5 * x * x) / std::sqrt(std::pow(2.0, n) * oracle::factorial(n) * std::sqrt(M_PI));
      CHECK(h[n] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("hermite functions are orthonormal and survive large arguments") {
  const int nmax = 80;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
  const double L = 20.0;
  const int N = 4001;
  const double h = 2 * L / (N - 1);
  for (int i = 0; i < N; ++i) {
    auto v = hermite_functions(nmax, -L + i * h);
    Eigen::Map<Eigen::VectorXd> m(v.data(), nmax + 1);
    g += h * m * m.transpose();
  }
  CHECK((g - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff() < 1e-10);
  auto far = hermite_functions(200, 25.0);
  for (double v : far) CHECK(std::isfinite(v));
  CHECK(far[200] != 0.0);
  auto far_ld = hermite_functions_ld(200, 25.0L);
  CHECK(static_cast<double>(far_ld[200]) == doctest::Approx(far[200]).epsilon(1e-10));
}

TEST_CASE("gauss-hermite integrates Gaussian moments exactly") {
  auto r = gauss_hermite(20);
  REQUIRE(r.nodes.size() == 20);
  for (int k = 0; k <= 30; k += 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    // int x^k e^{-x^2} = Gamma((k+1)/2)
    CHECK(s == doctest::Approx(std::tgamma(0.5 * (k + 1))).epsilon(1e-10));
  }
  for (std::size_t i = 0; i < r.nodes.size(); ++i) CHECK(r.nodes[i] == -r.nodes[r.nodes.size() - 1 - i]);
}

TEST_CASE("gauss-legendre integrates polynomials on [-1, 1]") {
  auto r = gauss_legendre(9);
  for (int k = 0; k <= 17; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    double ref = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(s == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("pairwise and compensated sums") {
  std::vector<double> v(100001, 0.1);
  double ref = 0.1 * v.size();
  CHECK(std::abs(pairwise_sum(v) - ref) < 1e-9);
  KahanSum k;
  k.add(1e16);
  k.add(1.0);
  k.add(-1e16);
  CHECK(k.value() == 1.0);
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}
