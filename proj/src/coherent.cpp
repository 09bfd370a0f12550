#include "dicke/coherent.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dicke/errors.hpp"
#include "dicke/special.hpp"

namespace dicke {

using cd = std::complex<double>;

cd glauber_amplitude(int n, cd alpha) {
  if (n < 0) throw std::domain_error("glauber_amplitude: n must be >= 0");
  const double r = std::abs(alpha);
  if (r == 0.0) return n == 0 ? 1.0 : 0.0;
  double logmag = -0.5 * r * r + n * std::log(r) - 0.5 * log_factorial(n);
  return std::polar(std::exp(logmag), n * std::arg(alpha));
}

cd spin_amplitude(int m_index, cd z, int two_j) {
  if (two_j < 1 || m_index < 0 || m_index > two_j) throw std::domain_error("spin_amplitude: m_index outside 0..2j");
  const double r = std::abs(z);
  if (r == 0.0) return m_index == 0 ? 1.0 : 0.0;
  double logmag = 0.5 * log_binomial(two_j, m_index) + m_index * std::log(r) - 0.5 * two_j * std::log1p(r * r);
  return std::polar(std::exp(logmag), m_index * std::arg(z));
}

namespace {

// Computes out[k] = exp(log_seed) * prod_{i<=k} factor(i) with a running rescale.
template <class Factor>
void scaled_product(int kmax, double log_seed, Factor factor, std::span<cd> out) {
  cd cur = 1.0;
  double shift = log_seed;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) cur *= factor(k);
    double mag = std::abs(cur);
    if (mag == 0.0) {
      for (int i = k; i <= kmax; ++i) out[i] = 0.0;
      return;
    }
    if (mag > 1e150 || mag < 1e-150) {
      shift += std::log(mag);
      cur /= mag;
      mag = 1.0;
    }
    double lg = std::log(mag) + shift;
    out[k] = lg < -745.0 ? cd(0.0) : cur / mag * std::exp(lg);
  }
}

}  // namespace

void glauber_amplitudes(int nmax, cd alpha, std::span<cd> out) {
  if (static_cast<int>(out.size()) < nmax + 1) throw std::invalid_argument("glauber_amplitudes: output too small");
  const double r2 = std::norm(alpha);
  if (r2 == 0.0) {
    for (int n = 0; n <= nmax; ++n) out[n] = n == 0 ? 1.0 : 0.0;
    return;
  }
  scaled_product(nmax, -0.5 * r2, [&](int n) { return alpha / std::sqrt(static_cast<double>(n)); }, out);
}

void spin_amplitudes(int two_j, cd z, std::span<cd> out) {
  if (static_cast<int>(out.size()) < two_j + 1) throw std::invalid_argument("spin_amplitudes: output too small");
  const double r2 = std::norm(z);
  if (r2 == 0.0) {
    for (int k = 0; k <= two_j; ++k) out[k] = k == 0 ? 1.0 : 0.0;
    return;
  }
  // sqrt(C(2j,k)/C(2j,k-1)) = sqrt((2j-k+1)/k)
  scaled_product(two_j, -0.5 * two_j * std::log1p(r2),
                 [&](int k) { return z * std::sqrt(static_cast<double>(two_j - k + 1) / k); }, out);
}

double husimi_exact(const GroundState& gs, const PhasePointExact& p) {
  const int N = gs.params.n_cut, K = gs.params.two_j;
  std::vector<cd> t(N + 1), s(K + 1);
  glauber_amplitudes(N, p.alpha, t);
  spin_amplitudes(K, p.z, s);
  cd amp = 0.0;
  for (int n = 0; n <= N; ++n) {
    cd row = 0.0;
    for (int k = 0; k <= K; ++k) row += gs.coeffs(n, k) * s[k];
    amp += t[n] * row;
  }
  return std::norm(amp);
}

double husimi_hp(const GroundState& gs, const PhasePoint& p) {
  const int N = gs.params.n_cut, K = gs.params.two_j;
  std::vector<cd> t(N + 1), s(K + 1);
  glauber_amplitudes(N, p.alpha(), t);
  glauber_amplitudes(K, p.beta(), s);
  cd amp = 0.0;
  for (int n = 0; n <= N; ++n) {
    cd row = 0.0;
    for (int k = 0; k <= K; ++k) row += gs.coeffs(n, k) * s[k];
    amp += t[n] * row;
  }
  return std::norm(amp);
}

NumericHusimi::NumericHusimi(GroundState gs) : gs_(std::move(gs)) {}

double NumericHusimi::value(const PhasePoint& p) const { return husimi_hp(gs_, p); }

PacketLayout NumericHusimi::layout() const {
  // Packets sit near alpha1 = +-sqrt(<n>), beta1 = +-sqrt(<m_index>).
  double nbar = 0.0, kbar = 0.0;
  for (int n = 0; n < gs_.coeffs.rows(); ++n)
    for (int k = 0; k < gs_.coeffs.cols(); ++k) {
      double w = gs_.coeffs(n, k) * gs_.coeffs(n, k);
      nbar += n * w;
      kbar += k * w;
    }
  return PacketLayout::symmetric(nbar > 1.0 ? std::sqrt(nbar) : 0.0, kbar > 1.0 ? std::sqrt(kbar) : 0.0);
}

namespace {

// Phi = |t(alpha)^T C s(beta)|^2. Per slab: (T C) S^T with T the alpha2 amplitudes.
class NumericSlabs : public SlabEvaluator {
 public:
  NumericSlabs(const GroundState& gs, const ProductGrid& g) : g_(g) {
    const int N = gs.params.n_cut, K = gs.params.two_j;
    C_ = gs.coeffs.cast<cd>();
    const std::size_t nb = g.beta1.size() * g.beta2.size();
    S_.resize(K + 1, nb);
    std::vector<cd> s(K + 1);
    std::size_t idx = 0;
    for (double b1 : g.beta1.nodes)
      for (double b2 : g.beta2.nodes) {
        glauber_amplitudes(K, {b1, b2}, s);
        for (int k = 0; k <= K; ++k) S_(k, idx) = s[k];
        ++idx;
      }
    n_ = N;
  }
  void slab(std::size_t i, double* out) const override {
    const std::size_t N2 = g_.alpha2.size();
    Eigen::MatrixXcd T(N2, n_ + 1);
    std::vector<cd> t(n_ + 1);
    for (std::size_t p = 0; p < N2; ++p) {
      glauber_amplitudes(n_, {g_.alpha1.nodes[i], g_.alpha2.nodes[p]}, t);
      for (int n = 0; n <= n_; ++n) T(p, n) = t[n];
    }
    Eigen::MatrixXcd G = T * C_;
    Eigen::MatrixXcd F = G * S_;
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> o(out, N2, S_.cols());
    o = F.cwiseAbs2();
  }

 private:
  const ProductGrid& g_;
  Eigen::MatrixXcd C_, S_;
  int n_;
};

}  // namespace

std::unique_ptr<SlabEvaluator> NumericHusimi::bind(const ProductGrid& g) const {
  return std::make_unique<NumericSlabs>(gs_, g);
}

double check_normalization(const GroundState& gs, const QuadratureSpec& q) {
  NumericHusimi phi(gs);
  ProductGrid g = make_grid(q, phi.layout());
  GridIntegrals r = integrate_grid(phi, g, {});
  double edge = 0.0;
  for (double e : r.edge_max) edge = std::max(edge, e);
  double dev = std::abs(r.norm - 1.0);
  if (dev > q.target_tol) {
    std::ostringstream msg;
    msg << "Husimi normalization " << r.norm << " misses 1 by " << dev << ": ";
    if (r.peak > 0 && edge / r.peak > q.target_tol)
      msg << "domain too small (edge/peak " << edge / r.peak << "), increase box_halfwidth";
    else
      msg << "node count insufficient, increase nodes_per_axis";
    throw NumericalError(msg.str());
  }
  return r.norm;
}

double exact_husimi_normalization(const GroundState& gs, const QuadratureSpec& q) {
  const int K = gs.params.two_j;
  const int N = gs.params.n_cut;
  NumericHusimi phi(gs);
  PacketLayout l = phi.layout();
  AxisRule a1 = make_axis_rule(q, l.alpha1), a2 = make_axis_rule(q, l.alpha2);
  QuadratureRule gl = gauss_legendre(K + 2);
  const int nphi = 2 * K + 3;
  // Spin amplitudes on the sphere nodes.
  std::vector<std::vector<cd>> spin;
  std::vector<double> wsph;
  for (std::size_t it = 0; it < gl.nodes.size(); ++it) {
    double ct = gl.nodes[it];
    double rz = std::sqrt((1.0 - ct) / (1.0 + ct));  // |z| = tan(theta/2)
    for (int ip = 0; ip < nphi; ++ip) {
      double ph = 2.0 * std::numbers::pi * ip / nphi;
      std::vector<cd> s(K + 1);
      spin_amplitudes(K, std::polar(rz, ph), s);
      spin.push_back(std::move(s));
      // d^2z/(1+|z|^2)^2 = (1/4) sin(theta) dtheta dphi
      wsph.push_back(0.25 * gl.weights[it] * 2.0 * std::numbers::pi / nphi);
    }
  }
  KahanSum total;
  std::vector<cd> t(N + 1);
  for (std::size_t i = 0; i < a1.size(); ++i)
    for (std::size_t p = 0; p < a2.size(); ++p) {
      glauber_amplitudes(N, {a1.nodes[i], a2.nodes[p]}, t);
      Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(K + 1);
      for (int n = 0; n <= N; ++n) row += t[n] * gs.coeffs.row(n).cast<cd>();
      double acc = 0.0;
      for (std::size_t s = 0; s < spin.size(); ++s) {
        cd amp = 0.0;
        for (int k = 0; k <= K; ++k) amp += row(k) * spin[s][k];
        acc += wsph[s] * std::norm(amp);
      }
      total.add(a1.weights[i] * a2.weights[p] * acc);
    }
  return (K + 1) * total.value() / (std::numbers::pi * std::numbers::pi);
}

}  // namespace dicke
