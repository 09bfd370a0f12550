#include <doctest.h>

#include <numbers>

#include "dicke/coherent.hpp"
#include "dicke/errors.hpp"
#include "dicke/measures.hpp"
#include "dicke/smearing.hpp"
#include "dicke/special.hpp"
#include "oracles.hpp"

using namespace dicke;
constexpr double kPi = std::numbers::pi;

namespace {

// int h_n(t) h_n'(t) g_s2(u - t) dt by a fine trapezoid.
double convolution_oracle(int n, int np, double u, double s2) {
  return oracle::trapz(
      [&](double t) {
        auto h = hermite_functions(std::max(n, np), t);
        return h[n] * h[np] * std::exp(-(u - t) * (u - t) / (2 * s2)) / std::sqrt(2 * kPi * s2);
      },
      14.0, 4001);
}

// |f|^2 smeared with an isotropic normalized Gaussian of variance s2 at (x, y).
template <class F>
double smear2d(F f, double x, double y, double s2) {
  const double L = 9.0;
  const int N = 241;
  const double h = 2 * L / (N - 1);
  double acc = 0.0;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      double a = -L + i * h, b = -L + k * h;
      acc += std::norm(f(a, b)) * std::exp(-((x - a) * (x - a) + (y - b) * (y - b)) / (2 * s2));
    }
  return acc * h * h / (2 * kPi * s2);
}

}  // namespace

TEST_CASE("gaussian integral closed form against direct convolution") {
  // n = n' = 0 has the elementary value exp(-u^2/(1+2 s2)) / sqrt(pi (1 + 2 s2)).
  for (double u : {0.0, 0.8, -2.1}) {
    double ref = std::exp(-u * u / 2.0) / std::sqrt(2 * kPi);
    CHECK(hermite_integral_unit(0, 0, u, 0.5) == doctest::Approx(ref).epsilon(1e-14));
  }
  for (auto [n, np] : {std::pair{1, 0}, std::pair{3, 2}, std::pair{7, 7}, std::pair{10, 4}})
    for (double u : {-1.3, 0.0, 0.45, 2.7}) {
      double ref = convolution_oracle(n, np, u, 0.5);
      CHECK(std::abs(hermite_integral_unit(n, np, u, 0.5) - ref) < 1e-12);
      CHECK(std::abs(hermite_integral_unit_direct(n, np, u, 0.5) - ref) < 1e-11);
      CHECK(std::abs(hermite_integral_unit(n, np, u, 0.3) - convolution_oracle(n, np, u, 0.3)) < 1e-12);
    }
}

TEST_CASE("closed form and exact quadrature tables agree where both are stable") {
  for (double x : {0.0, 1.1, -3.0}) {
    auto a = hermite_integral_table(kClosedFormMaxDegree, x, 1.0, IntegralMethod::ClosedForm);
    auto b = hermite_integral_table(kClosedFormMaxDegree, x, 1.0, IntegralMethod::Quadrature);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Frequency scaling: I^(f)(x) = sqrt(f) I_unit(sqrt(f) x).
  auto t = hermite_integral_table(5, 0.7, 2.0);
  CHECK(t(3, 1) == doctest::Approx(std::sqrt(2.0) * hermite_integral_unit(3, 1, std::sqrt(2.0) * 0.7, 0.5)));
  // High degree stays positive semidefinite on the diagonal.
  auto big = hermite_integral_table(90, 2.0, 1.0);
  for (int n = 0; n <= 90; ++n) CHECK(big(n, n) >= 0.0);
}

TEST_CASE("smeared densities against direct convolution of the wavefunction") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.8, 4, 30));
  SmearedDensities d(gs);
  const double s2 = d.config().sigma2;
  for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{1.2, -0.5}}) {
    double ref = smear2d([&](double a, double b) { return numeric_wavefunction(gs, Space::Position, a, b); }, x, y, s2);
    CHECK(d.position(x, y) == doctest::Approx(ref).epsilon(1e-9));
    // Momentum smearing width is 1/(2 sigma^2) per axis in k; density carries (2 pi)^2.
    double refk = 4 * kPi * kPi *
                  smear2d([&](double a, double b) { return numeric_wavefunction(gs, Space::Momentum, a, b); }, x, y,
                          1.0 / (4 * s2));
    CHECK(d.momentum(x, y) == doctest::Approx(refk).epsilon(1e-9));
  }
}

TEST_CASE("smeared densities are rescaled Husimi marginals") {
  auto gs = ground_state(DickeParams::make(1, 1, 1.0, 4, 30));
  SmearedDensities d(gs);
  NumericHusimi phi(gs);
  const auto cfg = d.config();
  const double c = 4 * kPi * cfg.sigma2;
  QuadratureSpec q;
  for (PhasePoint p : {PhasePoint{0.4, -0.3, 0.9, 0.2}, PhasePoint{-1.0, 0.5, 0.0, -0.7}}) {
    auto sc = coord_map(p, cfg);
    CHECK(d.position(sc.x, sc.y) == doctest::Approx(marginal_husimi(phi, 1, p.alpha1, p.beta1, q) / c).epsilon(1e-10));
    CHECK(d.momentum(sc.kx, sc.ky) == doctest::Approx(c * marginal_husimi(phi, 2, p.alpha2, p.beta2, q)).epsilon(1e-10));
    auto back = coord_unmap(sc, cfg);
    CHECK(back.alpha1 == doctest::Approx(p.alpha1));
    CHECK(back.beta2 == doctest::Approx(p.beta2));
  }
}

TEST_CASE("smeared measures are normalized and reproduce the marginals") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.8, 4, 30));
  QuadratureSpec q;
  auto m = smeared_measures(gs, q);
  CHECK(m.norm_xi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.norm_xi_tilde == doctest::Approx(1.0).epsilon(1e-9));
  NumericHusimi phi(gs);
  auto r = measure_report(phi, q, kDefaultNus);
  auto back = marginals_from_smeared(m, make_smearing_config(gs.params));
  CHECK(back.P1 == doctest::Approx(r.P1).epsilon(1e-8));
  CHECK(back.P2 == doctest::Approx(r.P2).epsilon(1e-8));
  CHECK(back.W1 == doctest::Approx(r.W1).epsilon(1e-8));
  CHECK(back.W2 == doctest::Approx(r.W2).epsilon(1e-8));
}

TEST_CASE("smearing requires resonance") {
  CHECK_THROWS_AS(make_smearing_config(DickeParams::make(1, 2, 0.3, 2, 2)), ConfigError);
  auto cfg = make_smearing_config(DickeParams::make(2, 2, 0.3, 2, 2));
  CHECK(cfg.sigma2 == doctest::Approx(0.25));
}
