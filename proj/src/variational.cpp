#include "dicke/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dicke/errors.hpp"

namespace dicke {

using cd = std::complex<double>;

EquilibriumConfig equilibrium(const DickeParams& p) {
  const double lc = critical_coupling(p);
  EquilibriumConfig eq;
  if (p.lambda < lc) return eq;
  eq.phase = Phase::Superradiant;
  const double r = p.lambda / lc;
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - std::pow(r, -4.0)));
  eq.alpha_e = -(p.lambda / p.omega) * std::sqrt(static_cast<double>(p.two_j)) * sin_theta;
  eq.z_e = std::sqrt((r - 1.0 / r) / (r + 1.0 / r));
  eq.beta_e = std::sqrt(static_cast<double>(p.two_j)) * eq.z_e;
  return eq;
}

double energy_surface(cd alpha, cd z, const DickeParams& p) {
  const double z2 = std::norm(z);
  const double j = p.j();
  return p.omega * std::norm(alpha) + j * p.omega0 * (z2 - 1.0) / (z2 + 1.0) +
         p.lambda * std::sqrt(2.0 * j) * (2.0 * alpha.real()) * (2.0 * z.real()) / (z2 + 1.0);
}

double energy_offdiagonal(cd alpha, cd z, const DickeParams& p) {
  const double z2 = std::norm(z);
  const double a2 = std::norm(alpha);
  const double j = p.j();
  const double overlap = std::exp(-2.0 * a2) * std::pow((1.0 - z2) / (1.0 + z2), p.two_j);
  if (overlap == 0.0) return 0.0;
  // (alpha - conj(alpha)) (z - conj(z)) = (2i Im alpha)(2i Im z) = -4 Im alpha Im z
  const double coupling = -4.0 * alpha.imag() * z.imag();
  return overlap * (-p.omega * a2 - j * p.omega0 * (1.0 + z2) / (1.0 - z2) +
                    p.lambda * std::sqrt(2.0 * j) * coupling / (1.0 - z2));
}

double cat_norm_squared(cd alpha, cd z, int two_j, Branch b) {
  const double z2 = std::norm(z);
  const double overlap = std::exp(-2.0 * std::norm(alpha)) * std::pow((1.0 - z2) / (1.0 + z2), two_j);
  return 2.0 * (1.0 + (b == Branch::Even ? overlap : -overlap));
}

double energy_surface_pm(cd alpha, cd z, const DickeParams& p, Branch b) {
  const double n2 = cat_norm_squared(alpha, z, p.two_j, b);
  if (!(n2 > 1e-14)) throw std::domain_error("cat state normalization vanishes for this branch");
  const double s = b == Branch::Even ? 1.0 : -1.0;
  return (energy_surface(alpha, z, p) + s * energy_offdiagonal(alpha, z, p)) / (0.5 * n2);
}

AnsatzState AnsatzState::make(const DickeParams& p, Branch b) { return make(p, equilibrium(p), b); }

AnsatzState AnsatzState::make(const DickeParams& p, const EquilibriumConfig& eq, Branch b) {
  p.validate();
  if (b == Branch::Odd && eq.displacement() == 0.0)
    throw std::domain_error("odd-parity ansatz has zero norm at the origin (normal phase)");
  AnsatzState st{p, eq, b};
  return st;
}

double ansatz_husimi_exact(const AnsatzState& st, const PhasePointExact& pt) {
  const double ae = st.eq.alpha_e, ze = st.eq.z_e;
  const double j = st.params.j();
  const int two_j = st.params.two_j;
  auto log_term = [&](double s) -> cd {
    // log <alpha|s alpha_e> + log <z|s z_e>
    cd la = -0.5 * std::norm(pt.alpha) - 0.5 * ae * ae + s * std::conj(pt.alpha) * ae;
    cd w = 1.0 + s * std::conj(pt.z) * ze;
    if (std::abs(w) == 0.0) return {-INFINITY, 0.0};
    cd lz = static_cast<double>(two_j) * std::log(w) - j * std::log1p(std::norm(pt.z)) - j * std::log1p(ze * ze);
    return la + lz;
  };
  cd l1 = log_term(1.0), l2 = log_term(-1.0);
  const double m = std::max(l1.real(), l2.real());
  if (!std::isfinite(m)) return 0.0;
  const double sgn = st.branch == Branch::Even ? 1.0 : -1.0;
  cd amp = std::exp(l1 - m) + sgn * std::exp(l2 - m);
  const double n2 = cat_norm_squared(ae, ze, two_j, st.branch);
  return std::exp(2.0 * m) * std::norm(amp) / n2;
}

namespace {

struct CatPieces {
  double ae, be, E, sgn, Z;
};

CatPieces pieces(const AnsatzState& st) {
  CatPieces c;
  c.ae = st.eq.alpha_e;
  c.be = st.eq.beta_e;
  c.E = c.ae * c.ae + c.be * c.be;
  c.sgn = st.branch == Branch::Even ? 1.0 : -1.0;
  c.Z = 1.0 + c.sgn * std::exp(-2.0 * c.E);
  return c;
}

// X(a) = (e^{-|a-e|^2} + e^{-|a+e|^2})/2, Y(a) = e^{-|a|^2 - E} with a = (alpha1, beta1).
inline double Xf(const CatPieces& c, double a1, double b1) {
  const double dm = (a1 - c.ae) * (a1 - c.ae) + (b1 - c.be) * (b1 - c.be);
  const double dp = (a1 + c.ae) * (a1 + c.ae) + (b1 + c.be) * (b1 + c.be);
  return 0.5 * (std::exp(-dm) + std::exp(-dp));
}
inline double Yf(const CatPieces& c, double a1, double b1) { return std::exp(-(a1 * a1 + b1 * b1) - c.E); }

class AnsatzSlabs : public SlabEvaluator {
 public:
  AnsatzSlabs(const AnsatzState& st, const ProductGrid& g) : c_(pieces(st)), g_(g) {
    const std::size_t N2 = g.alpha2.size(), N4 = g.beta2.size();
    U_.resize(N2 * N4);
    V_.resize(N2 * N4);
    for (std::size_t p = 0; p < N2; ++p)
      for (std::size_t r = 0; r < N4; ++r) {
        const double a2 = g.alpha2.nodes[p], b2 = g.beta2.nodes[r];
        const double gauss = std::exp(-(a2 * a2 + b2 * b2));
        U_[p * N4 + r] = gauss / c_.Z;
        V_[p * N4 + r] = c_.sgn * gauss * std::cos(2.0 * (a2 * c_.ae + b2 * c_.be)) / c_.Z;
      }
  }
  void slab(std::size_t i, double* out) const override {
    const std::size_t N2 = g_.alpha2.size(), N3 = g_.beta1.size(), N4 = g_.beta2.size();
    const double a1 = g_.alpha1.nodes[i];
    std::vector<double> X(N3), Y(N3);
    for (std::size_t q = 0; q < N3; ++q) {
      X[q] = Xf(c_, a1, g_.beta1.nodes[q]);
      Y[q] = Yf(c_, a1, g_.beta1.nodes[q]);
    }
    for (std::size_t p = 0; p < N2; ++p)
      for (std::size_t q = 0; q < N3; ++q) {
        double* o = out + (p * N3 + q) * N4;
        const double* u = U_.data() + p * N4;
        const double* v = V_.data() + p * N4;
        for (std::size_t r = 0; r < N4; ++r) o[r] = std::max(0.0, X[q] * u[r] + Y[q] * v[r]);
      }
  }

 private:
  CatPieces c_;
  const ProductGrid& g_;
  std::vector<double> U_, V_;
};

}  // namespace

double ansatz_husimi_hp(const AnsatzState& st, const PhasePoint& pt) {
  CatPieces c = pieces(st);
  const double gauss = std::exp(-(pt.alpha2 * pt.alpha2 + pt.beta2 * pt.beta2));
  const double cosv = std::cos(2.0 * (pt.alpha2 * c.ae + pt.beta2 * c.be));
  const double v = gauss * (Xf(c, pt.alpha1, pt.beta1) + c.sgn * Yf(c, pt.alpha1, pt.beta1) * cosv) / c.Z;
  return std::max(0.0, v);
}

PacketLayout AnsatzHusimi::layout() const { return PacketLayout::symmetric(st_.eq.alpha_e, st_.eq.beta_e); }

std::unique_ptr<SlabEvaluator> AnsatzHusimi::bind(const ProductGrid& g) const {
  return std::make_unique<AnsatzSlabs>(st_, g);
}

double analytic_ipr(const DickeParams& p) {
  const double E = equilibrium(p).displacement();
  const double c = std::cosh(E);
  return (1.0 + 1.0 / (c * c)) / 8.0;
}

double analytic_marginal_husimi(const AnsatzState& st, int kappa, double a, double b) {
  if (st.branch != Branch::Even) throw std::domain_error("marginal closed forms are for the even branch");
  CatPieces c = pieces(st);
  if (kappa == 1) {
    // e^{-|a|^2} (1 + zeta cosh(2 a.e)) / (1 + zeta^2), zeta = e^E
    const double val = Xf(c, a, b) + std::exp(-(a * a + b * b) - 2.0 * c.E);
    return val / c.Z;
  }
  if (kappa == 2) {
    // e^{-|b|^2} (1 + zeta^{-1} cos(2 b.e)) / (1 + zeta^{-2})
    const double val = std::exp(-(a * a + b * b)) * (1.0 + std::exp(-c.E) * std::cos(2.0 * (a * c.ae + b * c.be)));
    return val / c.Z;
  }
  throw ConfigError("kappa must be 1 or 2");
}

MarginalIpr analytic_marginal_ipr(const DickeParams& p) {
  // Written in x = 1/zeta = e^{-E} so that large displacements do not overflow.
  const double x = std::exp(-equilibrium(p).displacement());
  const double x2 = x * x, x4 = x2 * x2;
  const double den = 4.0 * (1.0 + x2) * (1.0 + x2);
  MarginalIpr m;
  m.P1 = (2.0 * x4 + 4.0 * std::pow(x, 2.5) + x2 + 1.0) / den;
  m.P2 = (x4 + x2 + 4.0 * std::pow(x, 1.5) + 2.0) / den;
  return m;
}

LimitKind parse_limit_kind(const std::string& s) {
  if (s == "joint") return LimitKind::Joint;
  if (s == "marginal1") return LimitKind::Marginal1;
  if (s == "marginal2") return LimitKind::Marginal2;
  if (s == "wehrl") return LimitKind::Wehrl;
  if (s == "wehrl1") return LimitKind::Wehrl1;
  if (s == "wehrl2") return LimitKind::Wehrl2;
  throw ConfigError("unknown limit kind '" + s + "'");
}

double thermo_limit(double nu, Phase phase, LimitKind kind) {
  const bool sr = phase == Phase::Superradiant;
  switch (kind) {
    case LimitKind::Joint:
    case LimitKind::Marginal1:
    case LimitKind::Marginal2: {
      if (!(nu > 0.0)) throw ConfigError("nu must be > 0");
      const double base = kind == LimitKind::Joint ? 1.0 / (nu * nu) : 1.0 / nu;
      return (sr && kind != LimitKind::Marginal2) ? std::pow(2.0, 1.0 - nu) * base : base;
    }
    case LimitKind::Wehrl: return sr ? 2.0 + std::numbers::ln2 : 2.0;
    case LimitKind::Wehrl1: return sr ? 1.0 + std::numbers::ln2 : 1.0;
    case LimitKind::Wehrl2: return 1.0;
  }
  return 0.0;
}

std::complex<double> ansatz_wavefunction(const AnsatzState& st, Space space, double x, double y) {
  if (st.branch != Branch::Even) throw std::domain_error("ansatz wavefunction implemented for the even branch");
  const DickeParams& p = st.params;
  const double w = p.omega, w0 = p.omega0;
  const double E = st.eq.displacement();
  // Mean positions of the displaced oscillators.
  const double xa = std::sqrt(2.0 / w) * st.eq.alpha_e;
  const double yb = std::sqrt(2.0 / w0) * st.eq.beta_e;
  const double norm = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * E)));
  if (space == Space::Position) {
    const double pre = std::pow(w * w0, 0.25) / std::sqrt(std::numbers::pi);
    const double g1 = std::exp(-0.5 * w * (x - xa) * (x - xa) - 0.5 * w0 * (y - yb) * (y - yb));
    const double g2 = std::exp(-0.5 * w * (x + xa) * (x + xa) - 0.5 * w0 * (y + yb) * (y + yb));
    return {pre * norm * (g1 + g2), 0.0};
  }
  const double pre = std::pow(w * w0, -0.25) / std::sqrt(std::numbers::pi);
  const double g = std::exp(-0.5 * x * x / w - 0.5 * y * y / w0);
  return {pre * norm * 2.0 * g * std::cos(x * xa + y * yb), 0.0};
}

std::string zero_plane_name(ZeroPlane z) { return z == ZeroPlane::Position ? "position" : "momentum"; }

namespace {

bool clip(double slope, double intercept, const Cell& c, ZeroLine& out) {
  // a = slope b + intercept with slope > 0 restricted to the cell.
  double lo = std::max(c.b_lo, (c.a_lo - intercept) / slope);
  double hi = std::min(c.b_hi, (c.a_hi - intercept) / slope);
  if (!(hi > lo)) return false;
  out.slope = slope;
  out.intercept = intercept;
  out.seg_b_lo = lo;
  out.seg_b_hi = hi;
  out.seg_a_lo = slope * lo + intercept;
  out.seg_a_hi = slope * hi + intercept;
  return true;
}

}  // namespace

std::vector<ZeroLine> husimi_zero_lines(const DickeParams& p, const Cell& cell, ZeroPlane plane) {
  if (!(cell.a_hi > cell.a_lo && cell.b_hi > cell.b_lo)) throw ConfigError("cell must have positive extent");
  EquilibriumConfig eq = equilibrium(p);
  std::vector<ZeroLine> lines;
  if (eq.phase == Phase::Normal || eq.alpha_e == 0.0 || eq.beta_e == 0.0) return lines;
  const double slope = -eq.beta_e / eq.alpha_e;
  if (plane == ZeroPlane::Position) {
    ZeroLine z;
    z.plane = plane;
    if (clip(slope, 0.0, cell, z)) lines.push_back(z);
    return lines;
  }
  // intercept_l = -pi (2l+1) / (2 alpha_e), increasing in l since alpha_e < 0.
  const double step = std::numbers::pi / std::abs(eq.alpha_e);
  const double half = 0.5 * step;
  const double t_min = cell.a_lo - slope * cell.b_hi;
  const double t_max = cell.a_hi - slope * cell.b_lo;
  long l_lo = static_cast<long>(std::floor((t_min - half) / step)) - 1;
  long l_hi = static_cast<long>(std::ceil((t_max - half) / step)) + 1;
  for (long l = l_lo; l <= l_hi; ++l) {
    const double t = -std::numbers::pi * (2.0 * l + 1.0) / (2.0 * eq.alpha_e);
    ZeroLine z;
    z.plane = plane;
    z.l = static_cast<int>(l);
    if (clip(slope, t, cell, z)) lines.push_back(z);
  }
  return lines;
}

PhasePoint zero_line_point(const DickeParams& p, const ZeroLine& line, double t) {
  const double b = line.seg_b_lo + t * (line.seg_b_hi - line.seg_b_lo);
  const double a = line.slope * b + line.intercept;
  EquilibriumConfig eq = equilibrium(p);
  if (line.plane == ZeroPlane::Position) {
    // Pair with the l = 0 momentum line through beta2 = 0.
    const double a2 = -std::numbers::pi / (2.0 * eq.alpha_e);
    return {a, a2, b, 0.0};
  }
  return {0.0, a, 0.0, b};
}

double energy_gradient_norm(const DickeParams& p, cd alpha, cd z, double h) {
  if (!(h > 0.0)) throw ConfigError("h must be > 0");
  double x[4] = {alpha.real(), alpha.imag(), z.real(), z.imag()};
  double g2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    double xp[4], xm[4];
    std::copy(x, x + 4, xp);
    std::copy(x, x + 4, xm);
    xp[k] += h;
    xm[k] -= h;
    double fp = energy_surface({xp[0], xp[1]}, {xp[2], xp[3]}, p);
    double fm = energy_surface({xm[0], xm[1]}, {xm[2], xm[3]}, p);
    double d = (fp - fm) / (2.0 * h);
    g2 += d * d;
  }
  return std::sqrt(g2);
}

double equilibrium_gradient_check(const DickeParams& p, double h) {
  EquilibriumConfig eq = equilibrium(p);
  return energy_gradient_norm(p, eq.alpha_e, eq.z_e, h);
}

EquilibriumConfig refine_equilibrium(const DickeParams& p, Branch b, double tol, int max_sweeps) {
  EquilibriumConfig start = equilibrium(p);
  auto f = [&](double a, double z) -> double {
    try {
      return energy_surface_pm(a, z, p, b);
    } catch (const std::domain_error&) {
      return INFINITY;
    }
  };
  auto descend = [&](double a, double z) {
    double x[2] = {a, z};
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double moved = 0.0;
      for (int k = 0; k < 2; ++k) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[k]));
        auto at = [&](double v) { return k == 0 ? f(v, x[1]) : f(x[0], v); };
        const double f0 = at(x[k]), fp = at(x[k] + h), fm = at(x[k] - h);
        const double d1 = (fp - fm) / (2.0 * h);
        const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
        double step = d2 > 0.0 ? -d1 / d2 : -std::copysign(0.1, d1);
        // Backtrack until the energy does not increase.
        for (int bt = 0; bt < 40 && at(x[k] + step) > f0; ++bt) step *= 0.5;
        if (at(x[k] + step) <= f0) {
          x[k] += step;
          moved = std::max(moved, std::abs(step));
        }
      }
      if (moved < tol) break;
    }
    return std::pair<double, double>{x[0], x[1]};
  };
  std::vector<std::pair<double, double>> starts = {{start.alpha_e, start.z_e}};
  starts.push_back({start.alpha_e - 0.5, start.z_e + 0.3});
  std::pair<double, double> best{start.alpha_e, start.z_e};
  double fbest = f(best.first, best.second);
  for (auto s : starts) {
    auto r = descend(s.first, s.second);
    double fr = f(r.first, r.second);
    if (fr < fbest) {
      fbest = fr;
      best = r;
    }
  }
  // Canonical representative of the (alpha, z) ~ (-alpha, -z) pair: alpha <= 0.
  if (best.first > 0.0) best = {-best.first, -best.second};
  EquilibriumConfig out;
  out.alpha_e = best.first;
  out.z_e = best.second;
  out.beta_e = std::sqrt(static_cast<double>(p.two_j)) * best.second;
  out.phase = start.phase;
  return out;
}

}  // namespace dicke
