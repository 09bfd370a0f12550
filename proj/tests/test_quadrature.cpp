#include <doctest.h>

#include <cstring>

#include "dicke/coherent.hpp"
#include "dicke/errors.hpp"
#include "dicke/measures.hpp"
#include "dicke/quadrature.hpp"

using namespace dicke;

namespace {

// Displaced anisotropic Gaussian with closed-form moments:
// int Phi^nu d^4/pi^2 = (s1 s2)^(1-nu) / nu^2 and W = 2 + ln(s1 s2).
class GaussianDensity : public PhaseDensity {
 public:
  GaussianDensity(double s1, double s2, double c1, double c2) : s1_(s1), s2_(s2), c1_(c1), c2_(c2) {}
  double value(const PhasePoint& p) const override {
    double a = (p.alpha1 - c1_) * (p.alpha1 - c1_) + p.alpha2 * p.alpha2;
    double b = (p.beta1 - c2_) * (p.beta1 - c2_) + p.beta2 * p.beta2;
    return std::exp(-a / s1_ - b / s2_) / (s1_ * s2_);
  }
  PacketLayout layout() const override {
    PacketLayout l;
    l.alpha1 = {c1_};
    l.beta1 = {c2_};
    return l;
  }

 private:
  double s1_, s2_, c1_, c2_;
};

}  // namespace

TEST_CASE("axis rules") {
  QuadratureSpec q;
  std::vector<double> c{-2.0, 2.0};
  AxisRule r = make_axis_rule(q, c);
  double h = q.spacing();
  CHECK(r.nodes.front() == doctest::Approx(-2.0 - q.box_halfwidth));
  CHECK(r.nodes.back() == doctest::Approx(2.0 + q.box_halfwidth));
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.nodes[i] - r.nodes[i - 1] == doctest::Approx(h));
  CHECK(r.edge.front() == 1);
  CHECK(r.edge.back() == 1);
  QuadratureSpec bad;
  bad.nodes_per_axis = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("gaussian oracle: norm, moments and entropy") {
  GaussianDensity phi(1.2, 0.6, 1.3, -0.8);
  std::vector<double> nus{0.5, 2.0, 3.0};
  QuadratureSpec q;
  auto r = integrate_grid(phi, make_grid(q, phi.layout()), nus);
  const double s = 1.2 * 0.6;
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 0; k < nus.size(); ++k)
    CHECK(r.moments[k] == doctest::Approx(std::pow(s, 1 - nus[k]) / (nus[k] * nus[k])).epsilon(1e-10));
  CHECK(r.wehrl == doctest::Approx(2.0 + std::log(s)).epsilon(1e-11));
  // Nodes sit on a fixed lattice, so the sampled peak is slightly below the true one.
  CHECK(r.peak <= 1.0 / s);
  CHECK(r.peak == doctest::Approx(1.0 / s).epsilon(0.05));
}

TEST_CASE("gauss-hermite scheme on a centered Gaussian") {
  GaussianDensity phi(1.0, 1.0, 0.0, 0.0);
  QuadratureSpec q;
  q.scheme = Scheme::GaussHermite;
  q.nodes_per_axis = 24;
  std::vector<double> nus{2.0};
  auto r = integrate_grid(phi, make_grid(q, {}), nus);
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.moments[0] == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("parallel kernel matches the serial reference and is thread-count independent") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.9, 6, 30));
  NumericHusimi phi(gs);
  QuadratureSpec q;
  q.nodes_per_axis = 33;
  auto g = make_grid(q, phi.layout());
  std::vector<double> nus{0.5, 2.0, 4.0};
  auto ser = integrate_grid_serial(phi, g, nus);
  auto p1 = integrate_grid(phi, g, nus, 1);
  auto p4 = integrate_grid(phi, g, nus, 4);
  CHECK(p1.norm == doctest::Approx(ser.norm).epsilon(1e-12));
  CHECK(p1.wehrl == doctest::Approx(ser.wehrl).epsilon(1e-12));
  for (std::size_t k = 0; k < nus.size(); ++k) CHECK(p1.moments[k] == doctest::Approx(ser.moments[k]).epsilon(1e-11));
  CHECK(std::memcmp(&p1.norm, &p4.norm, sizeof(double)) == 0);
  CHECK(std::memcmp(&p1.wehrl, &p4.wehrl, sizeof(double)) == 0);
  CHECK(std::memcmp(p1.moments.data(), p4.moments.data(), sizeof(double) * nus.size()) == 0);
  CHECK((p1.marginal1 - p4.marginal1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coverage failures") {
  GaussianDensity phi(1.0, 1.0, 0.0, 0.0);
  QuadratureSpec q;
  q.box_halfwidth = 2.0;
  q.nodes_per_axis = 17;
  auto r = integrate_grid(phi, make_grid(q, {}), {});
  CHECK_THROWS_AS(check_coverage(r, 1e-12), CoverageError);
  // The checked path widens the box until the tails are resolved.
  QuadratureSpec used;
  MeasureOptions opt;
  opt.coverage_retries = 3;
  auto ok = integrate_checked(phi, q, {}, opt, &used);
  CHECK(used.box_halfwidth > q.box_halfwidth);
  CHECK(ok.norm == doctest::Approx(1.0).epsilon(1e-8));
  opt.coverage_retries = 0;
  CHECK_THROWS_AS(integrate_checked(phi, q, {}, opt), CoverageError);
}
