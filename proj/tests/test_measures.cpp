#include <doctest.h>

#include "dicke/coherent.hpp"
#include "dicke/errors.hpp"
#include "dicke/measures.hpp"

using namespace dicke;

TEST_CASE("uncoupled state: Gaussian values of every measure") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.0, 20, 4));
  NumericHusimi phi(gs);
  auto r = measure_report(phi, {}, kDefaultNus);
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.P == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.W == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.P1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.P2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.W1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.W2 == doctest::Approx(1.0).epsilon(1e-12));
  for (double nu : kDefaultNus) CHECK(r.moment(nu) == doctest::Approx(1.0 / (nu * nu)).epsilon(1e-11));
  for (const auto& e : r.renyi) CHECK(e.entropy == doctest::Approx(std::log(1.0 / (e.nu * e.nu)) / (1 - e.nu)));
  auto [dp, dw] = factorization_gap(r);
  CHECK(std::abs(dp) < 1e-12);
  CHECK(std::abs(dw) < 1e-12);
  CHECK_THROWS_AS(r.moment(7.0), std::out_of_range);
}

TEST_CASE("single-measure helpers agree with the combined report") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.8, 4, 30));
  NumericHusimi phi(gs);
  QuadratureSpec q;
  auto r = measure_report(phi, q, kDefaultNus);
  CHECK(participation_ratio(phi, q) == doctest::Approx(r.P).epsilon(1e-12));
  CHECK(wehrl_entropy(phi, q) == doctest::Approx(r.W).epsilon(1e-12));
  CHECK(moment_nu(phi, 3.0, q) == doctest::Approx(r.moment(3.0)).epsilon(1e-12));
  CHECK(renyi_wehrl(phi, 2.0, q) == doctest::Approx(-std::log(r.P)).epsilon(1e-12));
  CHECK_THROWS_AS(renyi_wehrl(phi, 1.0, q), ConfigError);
  // Renyi entropies decrease with nu and W sits above all W_nu for nu > 1.
  double prev = 1e300;
  for (const auto& e : r.renyi) {
    CHECK(e.entropy < prev);
    prev = e.entropy;
    if (e.nu > 1) CHECK(r.W > e.entropy);
  }
}

TEST_CASE("marginals: pointwise and sampled paths agree") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.0, 6, 2));
  NumericHusimi phi(gs);
  QuadratureSpec q;
  CHECK(marginal_husimi(phi, 1, 0.4, -0.3, q) == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
  CHECK(marginal_husimi(phi, 2, 1.0, 0.0, q) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(marginal_husimi(phi, 3, 0, 0, q), ConfigError);

  auto gs2 = ground_state(DickeParams::make(1, 1, 1.0, 4, 30));
  NumericHusimi phi2(gs2);
  auto r = measure_report(phi2, q, kDefaultNus);
  auto m1 = marginal_measures(phi2, 1, q, kDefaultNus);
  CHECK(m1.P == doctest::Approx(r.P1).epsilon(1e-9));
  CHECK(m1.W == doctest::Approx(r.W1).epsilon(1e-9));
  CHECK(m1.norm == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("channel names") {
  CHECK(parse_channel("numeric") == Channel::Numeric);
  CHECK(channel_name(Channel::Variational) == "variational");
  CHECK_THROWS_AS(parse_channel("exact"), ConfigError);
}
