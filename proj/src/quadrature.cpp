#include "dicke/quadrature.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "dicke/errors.hpp"
#include "dicke/special.hpp"

namespace dicke {

const std::array<const char*, 4> kAxisNames = {"alpha1", "alpha2", "beta1", "beta2"};

void QuadratureSpec::validate() const {
  if (nodes_per_axis < 8) throw ConfigError("nodes_per_axis must be >= 8");
  if (!(target_tol > 0.0)) throw ConfigError("target_tol must be > 0");
  if (!(box_halfwidth > 0.0)) throw ConfigError("box_halfwidth must be > 0");
}

PacketLayout PacketLayout::symmetric(double a, double b) {
  PacketLayout l;
  a = std::abs(a);
  b = std::abs(b);
  if (a > 0.0) l.alpha1 = {-a, 0.0, a};
  if (b > 0.0) l.beta1 = {-b, 0.0, b};
  return l;
}

AxisRule make_axis_rule(const QuadratureSpec& q, std::span<const double> centers) {
  q.validate();
  AxisRule rule;
  if (q.scheme == Scheme::GaussHermite) {
    QuadratureRule gh = gauss_hermite(q.nodes_per_axis);
    rule.nodes = gh.nodes;
    rule.weights.resize(gh.nodes.size());
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
      rule.weights[i] = std::exp(std::log(gh.weights[i]) + gh.nodes[i] * gh.nodes[i]);
    rule.edge.assign(gh.nodes.size(), 0);
    rule.edge.front() = rule.edge.back() = 1;
    return rule;
  }
  const double h = q.spacing();
  const double L = q.box_halfwidth;
  std::set<long> ks;
  std::vector<double> cs(centers.begin(), centers.end());
  if (cs.empty()) cs.push_back(0.0);
  for (double c : cs) {
    long lo = static_cast<long>(std::ceil((c - L) / h - 1e-9));
    long hi = static_cast<long>(std::floor((c + L) / h + 1e-9));
    for (long k = lo; k <= hi; ++k) ks.insert(k);
  }
  for (long k : ks) {
    rule.nodes.push_back(k * h);
    rule.weights.push_back(h);
    rule.edge.push_back(!ks.count(k - 1) || !ks.count(k + 1));
  }
  return rule;
}

ProductGrid make_grid(const QuadratureSpec& q, const PacketLayout& l) {
  ProductGrid g;
  g.alpha1 = make_axis_rule(q, l.alpha1);
  g.alpha2 = make_axis_rule(q, l.alpha2);
  g.beta1 = make_axis_rule(q, l.beta1);
  g.beta2 = make_axis_rule(q, l.beta2);
  return g;
}

namespace {

class PointwiseEvaluator : public SlabEvaluator {
 public:
  PointwiseEvaluator(const PhaseDensity& phi, const ProductGrid& g) : phi_(phi), g_(g) {}
  void slab(std::size_t i, double* out) const override {
    std::size_t idx = 0;
    for (double a2 : g_.alpha2.nodes)
      for (double b1 : g_.beta1.nodes)
        for (double b2 : g_.beta2.nodes) out[idx++] = phi_.value({g_.alpha1.nodes[i], a2, b1, b2});
  }

 private:
  const PhaseDensity& phi_;
  const ProductGrid& g_;
};

inline double power(double f, double nu) {
  if (nu == 2.0) return f * f;
  if (nu == 3.0) return f * f * f;
  if (nu == 4.0) {
    double s = f * f;
    return s * s;
  }
  if (nu == 0.5) return std::sqrt(f);
  if (nu == 1.5) return f * std::sqrt(f);
  if (nu == 1.0) return f;
  return f > 0.0 ? std::exp(nu * std::log(f)) : 0.0;
}

inline double entropy_term(double f) { return f > 1e-300 ? -f * std::log(f) : 0.0; }

double ordered_sum(const std::vector<double>& v) { return pairwise_sum(v); }

}  // namespace

std::unique_ptr<SlabEvaluator> PhaseDensity::bind(const ProductGrid& g) const {
  return std::make_unique<PointwiseEvaluator>(*this, g);
}

GridIntegrals integrate_grid(const PhaseDensity& phi, const ProductGrid& g, std::span<const double> nus,
                             int threads) {
  const std::size_t N1 = g.alpha1.size(), N2 = g.alpha2.size(), N3 = g.beta1.size(), N4 = g.beta2.size();
  const std::size_t nn = nus.size();
  const std::size_t slab = N2 * N3 * N4;
  auto ev = phi.bind(g);

  std::vector<double> s_norm(N1), s_w(N1), s_peak(N1), s_mom(N1 * nn);
  std::vector<double> s_edge(N1 * 4, 0.0);
  Eigen::MatrixXd marg1 = Eigen::MatrixXd::Zero(N1, N3);
  std::vector<double> part2(N1 * N2 * N4, 0.0);
  const double* w2 = g.alpha2.weights.data();
  const double* w3 = g.beta1.weights.data();
  const double* w4 = g.beta2.weights.data();

  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<double> buf(slab);
    std::vector<double> row1(N3);
    std::vector<KahanSum> mom(nn);
#pragma omp for schedule(dynamic)
    for (long ii = 0; ii < static_cast<long>(N1); ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      ev->slab(i, buf.data());
      KahanSum norm, wehrl;
      for (auto& m : mom) m = KahanSum{};
      double peak = 0.0, e_a2 = 0.0, e_b1 = 0.0, e_b2 = 0.0;
      std::fill(row1.begin(), row1.end(), 0.0);
      double* p2 = part2.data() + i * N2 * N4;
      for (std::size_t p = 0; p < N2; ++p) {
        double rn = 0.0, rw = 0.0;
        for (std::size_t k = 0; k < nn; ++k) {
          double rm = 0.0;
          const double nu = nus[k];
          for (std::size_t q = 0; q < N3; ++q) {
            const double* f = buf.data() + (p * N3 + q) * N4;
            double acc = 0.0;
            for (std::size_t r = 0; r < N4; ++r) acc += w4[r] * power(f[r], nu);
            rm += w3[q] * acc;
          }
          mom[k].add(w2[p] * rm);
        }
        for (std::size_t q = 0; q < N3; ++q) {
          const double* f = buf.data() + (p * N3 + q) * N4;
          double an = 0.0, aw = 0.0;
          for (std::size_t r = 0; r < N4; ++r) {
            const double v = f[r];
            an += w4[r] * v;
            aw += w4[r] * entropy_term(v);
            p2[p * N4 + r] += w3[q] * v;
            peak = std::max(peak, v);
            if (g.alpha2.edge[p]) e_a2 = std::max(e_a2, v);
            if (g.beta1.edge[q]) e_b1 = std::max(e_b1, v);
            if (g.beta2.edge[r]) e_b2 = std::max(e_b2, v);
          }
          row1[q] += w2[p] * an;
          rn += w3[q] * an;
          rw += w3[q] * aw;
        }
        norm.add(w2[p] * rn);
        wehrl.add(w2[p] * rw);
      }
      s_norm[i] = norm.value();
      s_w[i] = wehrl.value();
      s_peak[i] = peak;
      for (std::size_t k = 0; k < nn; ++k) s_mom[i * nn + k] = mom[k].value();
      for (std::size_t q = 0; q < N3; ++q) marg1(i, q) = row1[q] / std::numbers::pi;
      s_edge[i * 4 + 0] = g.alpha1.edge[i] ? peak : 0.0;
      s_edge[i * 4 + 1] = e_a2;
      s_edge[i * 4 + 2] = e_b1;
      s_edge[i * 4 + 3] = e_b2;
    }
  }

  const double pi2 = std::numbers::pi * std::numbers::pi;
  GridIntegrals out;
  out.nus.assign(nus.begin(), nus.end());
  std::vector<double> tmp(N1);
  for (std::size_t i = 0; i < N1; ++i) tmp[i] = g.alpha1.weights[i] * s_norm[i];
  out.norm = ordered_sum(tmp) / pi2;
  for (std::size_t i = 0; i < N1; ++i) tmp[i] = g.alpha1.weights[i] * s_w[i];
  out.wehrl = ordered_sum(tmp) / pi2;
  out.moments.resize(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    for (std::size_t i = 0; i < N1; ++i) tmp[i] = g.alpha1.weights[i] * s_mom[i * nn + k];
    out.moments[k] = ordered_sum(tmp) / pi2;
  }
  out.peak = *std::max_element(s_peak.begin(), s_peak.end());
  for (std::size_t i = 0; i < N1; ++i)
    for (int a = 0; a < 4; ++a) out.edge_max[a] = std::max(out.edge_max[a], s_edge[i * 4 + a]);
  out.marginal1 = std::move(marg1);
  out.marginal2.resize(N2, N4);
  for (std::size_t p = 0; p < N2; ++p)
    for (std::size_t r = 0; r < N4; ++r) {
      for (std::size_t i = 0; i < N1; ++i) tmp[i] = g.alpha1.weights[i] * part2[(i * N2 + p) * N4 + r];
      out.marginal2(p, r) = ordered_sum(tmp) / std::numbers::pi;
    }
  return out;
}

GridIntegrals integrate_grid_serial(const PhaseDensity& phi, const ProductGrid& g, std::span<const double> nus) {
  const std::size_t N1 = g.alpha1.size(), N2 = g.alpha2.size(), N3 = g.beta1.size(), N4 = g.beta2.size();
  KahanSum norm, wehrl;
  std::vector<KahanSum> mom(nus.size());
  GridIntegrals out;
  out.nus.assign(nus.begin(), nus.end());
  out.marginal1 = Eigen::MatrixXd::Zero(N1, N3);
  out.marginal2 = Eigen::MatrixXd::Zero(N2, N4);
  for (std::size_t i = 0; i < N1; ++i)
    for (std::size_t p = 0; p < N2; ++p)
      for (std::size_t q = 0; q < N3; ++q)
        for (std::size_t r = 0; r < N4; ++r) {
          const double f = phi.value({g.alpha1.nodes[i], g.alpha2.nodes[p], g.beta1.nodes[q], g.beta2.nodes[r]});
          const double w = g.alpha1.weights[i] * g.alpha2.weights[p] * g.beta1.weights[q] * g.beta2.weights[r];
          norm.add(w * f);
          if (f > 1e-300) wehrl.add(-w * f * std::log(f));
          for (std::size_t k = 0; k < nus.size(); ++k) mom[k].add(w * std::pow(f, nus[k]));
          out.marginal1(i, q) += g.alpha2.weights[p] * g.beta2.weights[r] * f;
          out.marginal2(p, r) += g.alpha1.weights[i] * g.beta1.weights[q] * f;
          out.peak = std::max(out.peak, f);
          const unsigned char edges[4] = {g.alpha1.edge[i], g.alpha2.edge[p], g.beta1.edge[q], g.beta2.edge[r]};
          for (int a = 0; a < 4; ++a)
            if (edges[a]) out.edge_max[a] = std::max(out.edge_max[a], f);
        }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  out.norm = norm.value() / pi2;
  out.wehrl = wehrl.value() / pi2;
  for (auto& m : mom) out.moments.push_back(m.value() / pi2);
  out.marginal1 /= std::numbers::pi;
  out.marginal2 /= std::numbers::pi;
  return out;
}

void check_coverage(const GridIntegrals& r, double ratio) {
  for (int a = 0; a < 4; ++a) {
    double rel = r.peak > 0.0 ? r.edge_max[a] / r.peak : 0.0;
    if (rel > ratio) throw CoverageError(kAxisNames[a], rel);
  }
}

}  // namespace dicke
