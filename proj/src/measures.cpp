#include "dicke/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dicke/errors.hpp"
#include "dicke/special.hpp"

namespace dicke {

std::string channel_name(Channel c) { return c == Channel::Numeric ? "numeric" : "variational"; }

Channel parse_channel(const std::string& s) {
  if (s == "numeric") return Channel::Numeric;
  if (s == "variational") return Channel::Variational;
  throw ConfigError("unknown channel '" + s + "'");
}

double MeasureReport::moment(double nu) const {
  for (const auto& e : renyi)
    if (e.nu == nu) return e.moment;
  throw std::out_of_range("moment not computed for nu=" + std::to_string(nu));
}

namespace {

void check_nus(std::span<const double> nus) {
  for (double nu : nus)
    if (!(nu > 0.0) || nu == 1.0) throw ConfigError("nu must be > 0 and != 1");
}

double renyi_from_moment(double m, double nu) {
  if (!(m > 0.0)) throw NumericalError("moment underflow at nu=" + std::to_string(nu));
  return std::log(m) / (1.0 - nu);
}

void norm_gate(double norm, double tol, const char* what) {
  if (!(std::abs(norm - 1.0) <= tol)) {
    std::ostringstream msg;
    msg << what << " norm gate failed: " << norm << " (tolerance " << tol << ")";
    throw NumericalError(msg.str());
  }
}

}  // namespace

GridIntegrals integrate_checked(const PhaseDensity& phi, const QuadratureSpec& q0, std::span<const double> nus,
                                const MeasureOptions& opt, QuadratureSpec* used) {
  QuadratureSpec q = q0;
  q.validate();
  const PacketLayout layout = phi.layout();
  for (int attempt = 0;; ++attempt) {
    ProductGrid g = make_grid(q, layout);
    GridIntegrals r = integrate_grid(phi, g, nus, opt.threads);
    try {
      check_coverage(r, opt.coverage_ratio);
    } catch (const CoverageError&) {
      if (attempt >= opt.coverage_retries || q.scheme == Scheme::GaussHermite) throw;
      // Widen the window at fixed spacing.
      double h = q.spacing();
      q.box_halfwidth *= 1.5;
      q.nodes_per_axis = static_cast<int>(std::ceil(2.0 * q.box_halfwidth / h)) + 1;
      q.box_halfwidth = 0.5 * h * (q.nodes_per_axis - 1);
      continue;
    }
    if (used) *used = q;
    return r;
  }
}

MarginalMeasures marginal_from_samples(const Eigen::MatrixXd& f, const AxisRule& ra, const AxisRule& rb,
                                       std::span<const double> nus) {
  MarginalMeasures m;
  std::vector<double> nvec, pvec, wvec;
  std::vector<std::vector<double>> mom(nus.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    double an = 0.0, ap = 0.0, aw = 0.0;
    std::vector<double> am(nus.size(), 0.0);
    for (std::size_t k = 0; k < rb.size(); ++k) {
      const double v = std::max(f(i, k), 0.0);
      const double w = rb.weights[k];
      an += w * v;
      ap += w * v * v;
      if (v > 1e-300) aw -= w * v * std::log(v);
      for (std::size_t s = 0; s < nus.size(); ++s) am[s] += w * std::pow(v, nus[s]);
    }
    nvec.push_back(ra.weights[i] * an);
    pvec.push_back(ra.weights[i] * ap);
    wvec.push_back(ra.weights[i] * aw);
    for (std::size_t s = 0; s < nus.size(); ++s) mom[s].push_back(ra.weights[i] * am[s]);
  }
  const double pi = std::numbers::pi;
  m.norm = pairwise_sum(nvec) / pi;
  m.P = pairwise_sum(pvec) / pi;
  m.W = pairwise_sum(wvec) / pi;
  for (std::size_t s = 0; s < nus.size(); ++s) {
    double M = pairwise_sum(mom[s]) / pi;
    m.renyi.push_back({nus[s], M, renyi_from_moment(M, nus[s])});
  }
  return m;
}

MeasureReport measure_report(const PhaseDensity& phi, const QuadratureSpec& q, std::span<const double> nus,
                             const MeasureOptions& opt) {
  check_nus(nus);
  std::vector<double> all(nus.begin(), nus.end());
  if (std::find(all.begin(), all.end(), 2.0) == all.end()) all.push_back(2.0);
  MeasureReport rep;
  GridIntegrals r = integrate_checked(phi, q, all, opt, &rep.quad);
  norm_gate(r.norm, q.target_tol, "joint");
  rep.norm = r.norm;
  rep.W = r.wehrl;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (all[k] == 2.0) rep.P = r.moments[k];
    if (k < nus.size()) rep.renyi.push_back({all[k], r.moments[k], renyi_from_moment(r.moments[k], all[k])});
  }
  ProductGrid g = make_grid(rep.quad, phi.layout());
  rep.marginal1 = marginal_from_samples(r.marginal1, g.alpha1, g.beta1, nus);
  rep.marginal2 = marginal_from_samples(r.marginal2, g.alpha2, g.beta2, nus);
  norm_gate(rep.marginal1.norm, q.target_tol, "marginal 1");
  norm_gate(rep.marginal2.norm, q.target_tol, "marginal 2");
  rep.P1 = rep.marginal1.P;
  rep.P2 = rep.marginal2.P;
  rep.W1 = rep.marginal1.W;
  rep.W2 = rep.marginal2.W;
  return rep;
}

double moment_nu(const PhaseDensity& phi, double nu, const QuadratureSpec& q) {
  if (!(nu > 0.0)) throw ConfigError("nu must be > 0");
  std::vector<double> nus{nu};
  GridIntegrals r = integrate_checked(phi, q, nus);
  norm_gate(r.norm, q.target_tol, "joint");
  return r.moments[0];
}

double participation_ratio(const PhaseDensity& phi, const QuadratureSpec& q) { return moment_nu(phi, 2.0, q); }

double renyi_wehrl(const PhaseDensity& phi, double nu, const QuadratureSpec& q) {
  if (nu == 1.0) throw ConfigError("renyi_wehrl: nu must differ from 1");
  return renyi_from_moment(moment_nu(phi, nu, q), nu);
}

double wehrl_entropy(const PhaseDensity& phi, const QuadratureSpec& q) {
  GridIntegrals r = integrate_checked(phi, q, {});
  norm_gate(r.norm, q.target_tol, "joint");
  return r.wehrl;
}

double marginal_husimi(const PhaseDensity& phi, int kappa, double a, double b, const QuadratureSpec& q) {
  if (kappa != 1 && kappa != 2) throw ConfigError("kappa must be 1 or 2");
  ProductGrid g = make_grid(q, phi.layout());
  const AxisRule& ru = kappa == 1 ? g.alpha2 : g.alpha1;
  const AxisRule& rv = kappa == 1 ? g.beta2 : g.beta1;
  KahanSum s;
  double peak = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < ru.size(); ++i)
    for (std::size_t k = 0; k < rv.size(); ++k) {
      PhasePoint p = kappa == 1 ? PhasePoint{a, ru.nodes[i], b, rv.nodes[k]}
                                : PhasePoint{ru.nodes[i], a, rv.nodes[k], b};
      double v = phi.value(p);
      s.add(ru.weights[i] * rv.weights[k] * v);
      peak = std::max(peak, v);
      if (ru.edge[i] || rv.edge[k]) edge = std::max(edge, v);
    }
  if (peak > 0.0 && edge / peak > 1e-10)
    throw CoverageError(kappa == 1 ? "alpha2/beta2" : "alpha1/beta1", edge / peak);
  return s.value() / std::numbers::pi;
}

MarginalMeasures marginal_measures(const PhaseDensity& phi, int kappa, const QuadratureSpec& q,
                                   std::span<const double> nus) {
  if (kappa != 1 && kappa != 2) throw ConfigError("kappa must be 1 or 2");
  check_nus(nus);
  QuadratureSpec used;
  GridIntegrals r = integrate_checked(phi, q, nus, {}, &used);
  ProductGrid g = make_grid(used, phi.layout());
  MarginalMeasures m = kappa == 1 ? marginal_from_samples(r.marginal1, g.alpha1, g.beta1, nus)
                                  : marginal_from_samples(r.marginal2, g.alpha2, g.beta2, nus);
  norm_gate(m.norm, q.target_tol, "marginal");
  return m;
}

std::pair<double, double> factorization_gap(const MeasureReport& r) {
  return {r.P - r.P1 * r.P2, r.W - r.W1 - r.W2};
}

}  // namespace dicke
