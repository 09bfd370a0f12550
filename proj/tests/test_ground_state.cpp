#include <doctest.h>

#include "dicke/errors.hpp"
#include "dicke/ground_state.hpp"
#include "dicke/special.hpp"
#include "oracles.hpp"

using namespace dicke;

TEST_CASE("uncoupled ground state is |0> x |j,-j>") {
  auto gs = ground_state(DickeParams::make(1.3, 0.7, 0.0, 8, 5));
  CHECK(gs.energy == doctest::Approx(-0.7 * 4).epsilon(1e-14));
  CHECK(gs.coeff(0, 0) == doctest::Approx(1.0));
  CHECK(gs.coeffs.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("cutoff convergence") {
  SUBCASE("zero coupling converges at n_c = 0") {
    auto r = converge_cutoff(DickeParams::make(1, 1, 0.0, 20, 0), 1e-8, 100);
    CHECK(r.n_cut == 0);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.back().chosen);
  }
  SUBCASE("energy is non-increasing in the cutoff (nested subspaces)") {
    auto base = DickeParams::make(1, 1, 1.5, 20, 0);
    double prev = 1e300;
    for (int nc = 0; nc <= 80; nc += 10) {
      double e = ground_state(base.with_cutoff(nc)).energy;
      CHECK(e <= prev + 1e-10);
      prev = e;
    }
  }
  SUBCASE("chosen cutoff is deterministic") {
    auto base = DickeParams::make(1, 1, 1.0, 10, 0);
    auto a = converge_cutoff(base, 1e-8, 200);
    auto b = converge_cutoff(base, 1e-8, 200);
    CHECK(a.n_cut == b.n_cut);
    CHECK(a.gs.energy == b.gs.energy);
    CHECK(a.n_cut > 0);
    for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].energy == b.trace[i].energy);
  }
  SUBCASE("non-convergence is reported") {
    CHECK_THROWS_AS(converge_cutoff(DickeParams::make(1, 1, 3.0, 20, 0), 1e-8, 20), NumericalError);
  }
}

TEST_CASE("wavefunctions are normalized and Fourier-related") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.8, 4, 30));
  const double L = 9.0;
  const int N = 181;
  double pos = 0.0, mom = 0.0;
  const double h = 2 * L / (N - 1);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      double x = -L + i * h, y = -L + k * h;
      pos += std::norm(numeric_wavefunction(gs, Space::Position, x, y));
      mom += std::norm(numeric_wavefunction(gs, Space::Momentum, x, y));
    }
  CHECK(pos * h * h == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mom * h * h == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(numeric_wavefunction(gs, Space::Position, 0.3, -0.2).imag() == 0.0);

  // psi~(p, q) = (1/2pi) int psi(x, y) e^{-i(px + qy)} dx dy
  const double p = 0.7, q = -0.4;
  std::complex<double> ft = 0.0;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      double x = -L + i * h, y = -L + k * h;
      ft += numeric_wavefunction(gs, Space::Position, x, y) * std::exp(std::complex<double>(0, -(p * x + q * y)));
    }
  ft *= h * h / (2 * M_PI);
  auto direct = numeric_wavefunction(gs, Space::Momentum, p, q);
  CHECK(std::abs(ft - direct) < 1e-9);
}

TEST_CASE("uncoupled wavefunction is a product Gaussian") {
  auto gs = ground_state(DickeParams::make(2.0, 0.5, 0.0, 2, 3));
  for (double x : {-1.0, 0.0, 0.6})
    for (double y : {-0.4, 1.1}) {
      double ref = std::pow(2.0 * 0.5, 0.25) / std::sqrt(M_PI) * std::exp(-0.5 * (2.0 * x * x + 0.5 * y * y));
      CHECK(numeric_wavefunction(gs, Space::Position, x, y).real() == doctest::Approx(ref).epsilon(1e-13));
    }
}
