#include "dicke/ground_state.hpp"

#include <cmath>
#include <sstream>

#include "dicke/eigensolver.hpp"
#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/special.hpp"

namespace dicke {

GroundState make_ground_state(const DickeParams& p, const Eigen::VectorXd& v, double energy, double residual) {
  const int rows = p.n_cut + 1, cols = p.two_j + 1;
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw std::invalid_argument("ground state vector size mismatch");
  GroundState gs;
  gs.params = p;
  gs.energy = energy;
  gs.residual = residual;
  gs.coeffs.resize(rows, cols);
  for (int n = 0; n < rows; ++n)
    for (int mi = 0; mi < cols; ++mi) gs.coeffs(n, mi) = v(static_cast<Eigen::Index>(n) * cols + mi);
  gs.coeffs /= gs.coeffs.norm();
  Eigen::Index r, c;
  gs.coeffs.cwiseAbs().maxCoeff(&r, &c);
  if (gs.coeffs(r, c) < 0) gs.coeffs = -gs.coeffs;
  gs.parity = 1;
  return gs;
}

GroundState ground_state(const DickeParams& p, double tol) {
  p.validate();
  ParityBlock blk = assemble_parity_block(p, +1);
  Eigenpair ep = lowest_eigenpair(blk.matrix, tol);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.n_cut + 1) * (p.two_j + 1));
  for (std::size_t i = 0; i < blk.members.size(); ++i) full(blk.members[i]) = ep.vector(i);
  return make_ground_state(p, full, ep.value, ep.residual);
}

CutoffResult converge_cutoff(const DickeParams& base, double energy_tol, int n_cut_max, int step,
                             const GroundStateProvider& provider) {
  base.validate();
  if (!(energy_tol > 0.0)) throw ConfigError("converge_cutoff: energy_tol must be > 0");
  if (step < 1) throw ConfigError("converge_cutoff: step must be >= 1");
  if (n_cut_max < 0) throw ConfigError("converge_cutoff: n_cut_max must be >= 0");
  auto solve = [&](int nc) { return provider ? provider(base.with_cutoff(nc)) : ground_state(base.with_cutoff(nc)); };

  CutoffResult res;
  GroundState cur = solve(0);
  for (int nc = 0; nc <= n_cut_max; nc += step) {
    GroundState next = solve(nc + step);
    CutoffStep st;
    st.n_cut = nc;
    st.energy = cur.energy;
    st.delta = cur.energy - next.energy;
    double leak = 0.0;
    for (int n = nc + 1; n <= nc + step; ++n) leak += next.coeffs.row(n).squaredNorm();
    st.leakage = leak;
    if (std::abs(st.delta) < energy_tol && leak < energy_tol) {
      st.chosen = true;
      res.trace.push_back(st);
      res.n_cut = nc;
      res.gs = std::move(cur);
      return res;
    }
    res.trace.push_back(st);
    cur = std::move(next);
  }
  std::ostringstream msg;
  msg << "cutoff did not converge up to n_c=" << n_cut_max << "; trend (n_c, dE, leakage):";
  for (const auto& s : res.trace) msg << " (" << s.n_cut << ", " << s.delta << ", " << s.leakage << ")";
  throw NumericalError(msg.str());
}

std::complex<double> numeric_wavefunction(const GroundState& gs, Space space, double x, double y) {
  const auto& p = gs.params;
  const int nmax = p.n_cut, kmax = p.two_j;
  if (space == Space::Position) {
    auto hx = hermite_functions(nmax, std::sqrt(p.omega) * x);
    auto hy = hermite_functions(kmax, std::sqrt(p.omega0) * y);
    double s = 0.0;
    for (int n = 0; n <= nmax; ++n) {
      double row = 0.0;
      for (int k = 0; k <= kmax; ++k) row += gs.coeffs(n, k) * hy[k];
      s += hx[n] * row;
    }
    return {std::pow(p.omega * p.omega0, 0.25) * s, 0.0};
  }
  auto hx = hermite_functions(nmax, x / std::sqrt(p.omega));
  auto hy = hermite_functions(kmax, y / std::sqrt(p.omega0));
  static const std::complex<double> phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  std::complex<double> s = 0.0;
  for (int n = 0; n <= nmax; ++n)
    for (int k = 0; k <= kmax; ++k) s += phase[(n + k) % 4] * gs.coeffs(n, k) * hx[n] * hy[k];
  return std::pow(p.omega * p.omega0, -0.25) * s;
}

}  // namespace dicke
