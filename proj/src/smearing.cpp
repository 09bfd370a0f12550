#include "dicke/smearing.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dicke/coherent.hpp"
#include "dicke/errors.hpp"
#include "dicke/special.hpp"

namespace dicke {

SmearingConfig make_smearing_config(const DickeParams& p) {
  p.validate();
  if (std::abs(p.omega - p.omega0) > 1e-12 * std::max(p.omega, p.omega0))
    throw ConfigError("smearing relations require resonance (omega == omega0)");
  return {1.0 / (2.0 * p.omega), p.omega};
}

SmearCoordinates coord_map(const PhasePoint& p, const SmearingConfig& cfg) {
  const double s = cfg.sigma();
  return {2.0 * s * p.alpha1, 2.0 * s * p.beta1, p.alpha2 / s, p.beta2 / s};
}

PhasePoint coord_unmap(const SmearCoordinates& c, const SmearingConfig& cfg) {
  const double s = cfg.sigma();
  return {c.x / (2.0 * s), s * c.kx, c.y / (2.0 * s), s * c.ky};
}

namespace {

struct SumParams {
  long double alpha, s, y;
};

SumParams sum_params(double u, double s2) {
  SumParams sp;
  const long double S2 = s2;
  sp.alpha = std::sqrt(2 * S2 / (2 * S2 + 1));
  sp.s = u / (std::sqrt(S2) * std::sqrt(2 * (1 + 2 * S2)));
  sp.y = sp.alpha * sp.s / std::sqrt(1 - sp.alpha * sp.alpha);
  return sp;
}

}  // namespace

double hermite_integral_unit(int n, int np, double u, double s2) {
  if (n < 0 || np < 0) throw std::domain_error("hermite_integral: negative degree");
  if (!(s2 > 0.0)) throw std::domain_error("hermite_integral: variance must be > 0");
  SumParams sp = sum_params(u, s2);
  const long double a2 = sp.alpha * sp.alpha;
  const int mu = std::min(n, np);
  const int Mmax = n + np;
  // H_M(y) = h_M(y) exp(0.5 (M ln 2 + ln M! + 0.5 ln pi) + y^2/2)
  std::vector<long double> h = hermite_functions_ld(Mmax, sp.y);
  const long double lpi = std::log(std::numbers::pi_v<long double>);
  const long double lpre = -0.5L * std::log(2 * std::numbers::pi_v<long double> * s2) + std::log(sp.alpha) +
                           0.5L * (std::lgamma((long double)n + 1) + std::lgamma((long double)np + 1)) +
                           0.5L * Mmax * std::log((1 - a2) / 2) - (long double)u * u / (1 + 2 * (long double)s2) +
                           sp.y * sp.y / 2;
  const long double lratio = std::log(2 / (1 - a2));
  long double sum = 0;
  for (int k = 0; k <= mu; ++k) {
    const int M = Mmax - 2 * k;
    if (h[M] == 0) continue;
    long double lt = lpre - std::lgamma((long double)k + 1) - std::lgamma((long double)n - k + 1) -
                     std::lgamma((long double)np - k + 1) + k * lratio +
                     0.5L * (M * std::log(2.0L) + std::lgamma((long double)M + 1) + 0.5L * lpi);
    sum += std::exp(lt) * h[M];
  }
  return static_cast<double>(sum);
}

double hermite_integral_unit_direct(int n, int np, double u, double s2) {
  if (n < 0 || np < 0) throw std::domain_error("hermite_integral: negative degree");
  const double alpha = std::sqrt(2 * s2 / (2 * s2 + 1));
  const double s = u / (std::sqrt(s2) * std::sqrt(2 * (1 + 2 * s2)));
  const double a2 = alpha * alpha;
  const double y = alpha * s / std::sqrt(1 - a2);
  const int mu = std::min(n, np);
  std::vector<double> H = hermite_polynomials(n + np, y);
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  double sum = 0.0;
  for (int k = 0; k <= mu; ++k)
    sum += std::pow(2.0 / (1 - a2), k) * H[n + np - 2 * k] / (fact(k) * fact(n - k) * fact(np - k));
  const double A = 1.0 / std::sqrt(2 * std::numbers::pi * s2);
  return A * alpha * std::sqrt(fact(n) * fact(np) * std::pow((1 - a2) / 2, n + np)) * std::exp(-u * u / (1 + 2 * s2)) *
         sum;
}

namespace {

// Exact convolution by Gauss-Hermite: the integrand is a Gaussian times a
// polynomial of degree 2 nmax, integrated with nmax + 1 nodes.
Eigen::MatrixXd unit_table_quadrature(int nmax, double u, double s2) {
  const double c = 1.0 + 1.0 / (2.0 * s2);
  const double m = u / (2.0 * s2 * c);
  QuadratureRule gh = gauss_hermite(nmax + 1);
  const int Q = static_cast<int>(gh.nodes.size());
  Eigen::MatrixXd H(Q, nmax + 1);
  Eigen::VectorXd W(Q);
  const double g0 = 1.0 / std::sqrt(2.0 * std::numbers::pi * s2);
  for (int i = 0; i < Q; ++i) {
    const double up = m + gh.nodes[i] / std::sqrt(c);
    auto h = hermite_functions(nmax, up);
    for (int n = 0; n <= nmax; ++n) H(i, n) = h[n];
    // weight for the plain integral: w e^{t^2} / sqrt(c), times the smearing kernel
    const double wi = std::exp(std::log(gh.weights[i]) + gh.nodes[i] * gh.nodes[i]) / std::sqrt(c);
    W(i) = wi * g0 * std::exp(-(u - up) * (u - up) / (2.0 * s2));
  }
  return H.transpose() * W.asDiagonal() * H;
}

Eigen::MatrixXd unit_table_closed(int nmax, double u, double s2) {
  Eigen::MatrixXd I(nmax + 1, nmax + 1);
  for (int n = 0; n <= nmax; ++n)
    for (int np = 0; np <= n; ++np) I(n, np) = I(np, n) = hermite_integral_unit(n, np, u, s2);
  return I;
}

}  // namespace

Eigen::MatrixXd hermite_integral_table(int nmax, double x, double freq, IntegralMethod method) {
  const double u = std::sqrt(freq) * x;
  bool closed = method == IntegralMethod::ClosedForm || (method == IntegralMethod::Auto && nmax <= kClosedFormMaxDegree);
  Eigen::MatrixXd I = closed ? unit_table_closed(nmax, u, 0.5) : unit_table_quadrature(nmax, u, 0.5);
  return std::sqrt(freq) * I;
}

double hermite_integral(int n, int n_prime, double x, const SmearingConfig& cfg) {
  return std::sqrt(cfg.omega) * hermite_integral_unit(n, n_prime, std::sqrt(cfg.omega) * x, 0.5);
}

SmearedDensities::SmearedDensities(const GroundState& gs, IntegralMethod m)
    : gs_(gs), cfg_(make_smearing_config(gs.params)), method_(m) {
  static const std::complex<double> phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  D_.resize(gs.coeffs.rows(), gs.coeffs.cols());
  for (int n = 0; n < gs.coeffs.rows(); ++n)
    for (int k = 0; k < gs.coeffs.cols(); ++k) D_(n, k) = phase[(n + k) % 4] * gs.coeffs(n, k);
}

namespace {

void positivity(double v, const char* what) {
  if (v < -1e-12) {
    std::ostringstream msg;
    msg << what << " density negative (" << v << "): closed-form sum lost precision";
    throw NumericalError(msg.str());
  }
}

}  // namespace

Eigen::MatrixXd SmearedDensities::position_grid(const std::vector<double>& xs, const std::vector<double>& ys) const {
  const int N = gs_.params.n_cut, K = gs_.params.two_j;
  const Eigen::MatrixXd& C = gs_.coeffs;
  std::vector<Eigen::MatrixXd> Ix(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) Ix[i] = hermite_integral_table(N, xs[i], cfg_.omega, method_);
  Eigen::MatrixXd out(xs.size(), ys.size());
  for (std::size_t q = 0; q < ys.size(); ++q) {
    Eigen::MatrixXd Iy = hermite_integral_table(K, ys[q], cfg_.omega, method_);
    Eigen::MatrixXd M = C * Iy * C.transpose();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double v = Ix[i].cwiseProduct(M).sum();
      positivity(v, "position");
      out(i, q) = std::max(v, 0.0);
    }
  }
  return out;
}

Eigen::MatrixXd SmearedDensities::momentum_grid(const std::vector<double>& kxs, const std::vector<double>& kys) const {
  const int N = gs_.params.n_cut, K = gs_.params.two_j;
  const double fk = 1.0 / cfg_.omega;
  const double scale = 4.0 * std::numbers::pi * std::numbers::pi;
  std::vector<Eigen::MatrixXd> Ix(kxs.size());
  for (std::size_t i = 0; i < kxs.size(); ++i) Ix[i] = hermite_integral_table(N, kxs[i], fk, method_);
  Eigen::MatrixXd out(kxs.size(), kys.size());
  for (std::size_t q = 0; q < kys.size(); ++q) {
    Eigen::MatrixXd Iy = hermite_integral_table(K, kys[q], fk, method_);
    Eigen::MatrixXd M = (D_ * Iy.cast<std::complex<double>>() * D_.adjoint()).real();
    for (std::size_t i = 0; i < kxs.size(); ++i) {
      double v = scale * Ix[i].cwiseProduct(M).sum();
      positivity(v, "momentum");
      out(i, q) = std::max(v, 0.0);
    }
  }
  return out;
}

double SmearedDensities::position(double x, double y) const { return position_grid({x}, {y})(0, 0); }
double SmearedDensities::momentum(double kx, double ky) const { return momentum_grid({kx}, {ky})(0, 0); }

double smeared_position_density(const GroundState& gs, double x, double y, const SmearingConfig& cfg) {
  (void)cfg;
  return SmearedDensities(gs).position(x, y);
}

double smeared_momentum_density(const GroundState& gs, double kx, double ky, const SmearingConfig& cfg) {
  (void)cfg;
  return SmearedDensities(gs).momentum(kx, ky);
}

namespace {

struct Measured {
  double norm, P, W;
};

Measured integrate_density(const Eigen::MatrixXd& f, const AxisRule& ru, const AxisRule& rv, double measure) {
  std::vector<double> vn, vp, vw;
  for (std::size_t i = 0; i < ru.size(); ++i) {
    double an = 0, ap = 0, aw = 0;
    for (std::size_t k = 0; k < rv.size(); ++k) {
      const double v = f(i, k), w = rv.weights[k];
      an += w * v;
      ap += w * v * v;
      if (v > 1e-300) aw -= w * v * std::log(v);
    }
    vn.push_back(ru.weights[i] * an);
    vp.push_back(ru.weights[i] * ap);
    vw.push_back(ru.weights[i] * aw);
  }
  return {measure * pairwise_sum(vn), measure * pairwise_sum(vp), measure * pairwise_sum(vw)};
}

AxisRule scaled(const AxisRule& r, double factor) {
  AxisRule s = r;
  for (auto& x : s.nodes) x *= factor;
  for (auto& w : s.weights) w *= factor;
  return s;
}

}  // namespace

SmearedMeasures smeared_measures(const GroundState& gs, const QuadratureSpec& q) {
  SmearedDensities dens(gs);
  const double s = dens.config().sigma();
  NumericHusimi phi(gs);
  ProductGrid g = make_grid(q, phi.layout());
  // Phase-space axes mapped to r and k coordinates.
  AxisRule rx = scaled(g.alpha1, 2.0 * s), ry = scaled(g.beta1, 2.0 * s);
  AxisRule kx = scaled(g.alpha2, 1.0 / s), ky = scaled(g.beta2, 1.0 / s);
  Eigen::MatrixXd xi = dens.position_grid(rx.nodes, ry.nodes);
  Eigen::MatrixXd xt = dens.momentum_grid(kx.nodes, ky.nodes);
  Measured a = integrate_density(xi, rx, ry, 1.0);
  Measured b = integrate_density(xt, kx, ky, 1.0 / (4.0 * std::numbers::pi * std::numbers::pi));
  SmearedMeasures m;
  m.norm_xi = a.norm;
  m.P_xi = a.P;
  m.W_xi = a.W;
  m.norm_xi_tilde = b.norm;
  m.P_xi_tilde = b.P;
  m.W_xi_tilde = b.W;
  if (std::abs(m.norm_xi - 1.0) > q.target_tol || std::abs(m.norm_xi_tilde - 1.0) > q.target_tol) {
    std::ostringstream msg;
    msg << "smeared density normalization failed (xi " << m.norm_xi << ", xi_tilde " << m.norm_xi_tilde << ")";
    throw NumericalError(msg.str());
  }
  return m;
}

MarginalFromSmearing marginals_from_smeared(const SmearedMeasures& m, const SmearingConfig& cfg) {
  const double c = 4.0 * std::numbers::pi * cfg.sigma2;
  return {c * m.P_xi, m.P_xi_tilde / c, m.W_xi - std::log(c), m.W_xi_tilde + std::log(c)};
}

}  // namespace dicke
