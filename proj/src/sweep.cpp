#include "dicke/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "dicke/cache.hpp"
#include "dicke/coherent.hpp"
#include "dicke/errors.hpp"
#include "dicke/smearing.hpp"

namespace dicke {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void SweepConfig::validate() const {
  DickeParams b = base;
  b.n_cut = n_cut.value_or(0);
  b.validate();
  if (lambda_grid.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 0.0)) throw ConfigError("lambda values must be >= 0");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) throw ConfigError("lambda grid must be strictly increasing");
  }
  if (channels.empty()) throw ConfigError("no channel selected");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  for (double nu : nus)
    if (!(nu > 0.0) || nu == 1.0) throw ConfigError("nu values must be > 0 and != 1");
  if (n_cut && *n_cut < 0) throw ConfigError("n_cut must be >= 0");
  if (!(solver_tol > 0.0) || !(energy_tol > 0.0)) throw ConfigError("tolerances must be > 0");
  quad.validate();
}

std::vector<double> parse_lambda_grid(const std::string& s) {
  std::vector<double> out;
  auto num = [&](const std::string& t) {
    try {
      std::size_t pos = 0;
      double v = std::stod(t, &pos);
      if (pos != t.size()) throw ConfigError("bad number '" + t + "' in lambda grid");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + t + "' in lambda grid");
    }
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ':')) parts.push_back(t);
    if (parts.size() != 3) throw ConfigError("lambda grid range must be lo:hi:step");
    double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
    if (!(step > 0.0) || hi < lo) throw ConfigError("lambda grid range needs step > 0 and hi >= lo");
    long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + i * step);
    return out;
  }
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ','))
    if (!t.empty()) out.push_back(num(t));
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 50; ++i) {
    double l = i * 0.02;
    if (l > 0.4 + 1e-12 && l < 0.6 - 1e-12) continue;
    g.push_back(l);
  }
  for (int i = 0; i <= 40; ++i) g.push_back(0.4 + i * 0.005);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), g.end());
  return g;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig c) {
  try {
    if (j.contains("omega")) c.base.omega = j["omega"].get<double>();
    if (j.contains("omega0")) c.base.omega0 = j["omega0"].get<double>();
    if (j.contains("two_j")) c.base.two_j = j["two_j"].get<int>();
    if (j.contains("n_cut") && !j["n_cut"].is_null()) c.n_cut = j["n_cut"].get<int>();
    if (j.contains("lambda_grid")) {
      const auto& g = j["lambda_grid"];
      if (g.is_string()) c.lambda_grid = parse_lambda_grid(g.get<std::string>());
      else c.lambda_grid = g.get<std::vector<double>>();
    }
    if (j.contains("channels")) {
      c.channels.clear();
      for (const auto& s : j["channels"]) c.channels.push_back(parse_channel(s.get<std::string>()));
    }
    if (j.contains("nu")) c.nus = j["nu"].get<std::vector<double>>();
    if (j.contains("nodes")) c.quad.nodes_per_axis = j["nodes"].get<int>();
    if (j.contains("box_halfwidth")) c.quad.box_halfwidth = j["box_halfwidth"].get<double>();
    if (j.contains("scheme")) {
      auto s = j["scheme"].get<std::string>();
      if (s == "trapezoid") c.quad.scheme = Scheme::Trapezoid;
      else if (s == "gauss-hermite") c.quad.scheme = Scheme::GaussHermite;
      else throw ConfigError("unknown scheme '" + s + "'");
    }
    if (j.contains("tol")) c.quad.target_tol = j["tol"].get<double>();
    if (j.contains("n_cut_max")) c.n_cut_max = j["n_cut_max"].get<int>();
    if (j.contains("energy_tol")) c.energy_tol = j["energy_tol"].get<double>();
    if (j.contains("out")) c.output = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  return c;
}

GroundState sweep_ground_state(const SweepConfig& cfg, double lambda, std::vector<CutoffStep>* trace) {
  DickeParams p = cfg.base.with_lambda(lambda);
  std::optional<GroundStateCache> cache;
  if (!cfg.cache_dir.empty()) cache.emplace(cfg.cache_dir);
  GroundStateProvider provider = [&](const DickeParams& q) {
    return cache ? cache->get_or_compute(q, cfg.solver_tol) : ground_state(q, cfg.solver_tol);
  };
  if (cfg.n_cut) return provider(p.with_cutoff(*cfg.n_cut));
  CutoffResult r = converge_cutoff(p, cfg.energy_tol, cfg.n_cut_max, cfg.cutoff_step, provider);
  if (trace) *trace = r.trace;
  return r.gs;
}

namespace {

MeasureReport measure_one(const SweepConfig& cfg, double lambda, Channel ch, int threads) {
  MeasureOptions opt;
  opt.threads = threads;
  MeasureReport rep;
  if (ch == Channel::Numeric) {
    GroundState gs = sweep_ground_state(cfg, lambda);
    NumericHusimi phi(gs);
    rep = measure_report(phi, cfg.quad, cfg.nus, opt);
    rep.n_cut = gs.params.n_cut;
  } else {
    DickeParams p = cfg.base.with_lambda(lambda);
    AnsatzHusimi phi(AnsatzState::make(p));
    rep = measure_report(phi, cfg.quad, cfg.nus, opt);
    rep.n_cut = 0;
  }
  rep.channel = ch;
  rep.lambda = lambda;
  rep.two_j = cfg.base.two_j;
  return rep;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (double l : cfg.lambda_grid)
    for (Channel c : cfg.channels) {
      SweepRow r;
      r.channel = c;
      r.lambda = l;
      rows.push_back(r);
    }
  const int hw = std::max(1, omp_get_num_procs());
  const int inner = std::max(1, hw / cfg.workers);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t i = next++;
      if (i >= rows.size()) return;
      try {
        rows[i].report = measure_one(cfg, rows[i].lambda, rows[i].channel, inner);
        rows[i].ok = true;
      } catch (const std::exception& e) {
        rows[i].ok = false;
        rows[i].error = e.what();
      }
    }
  };
  const int nw = std::min<int>(cfg.workers, static_cast<int>(rows.size()));
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

namespace {

std::string nu_label(double nu) {
  std::ostringstream os;
  os << nu;
  return "M_" + os.str();
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<double>& nus) {
  std::ostringstream os;
  os << "channel,lambda,two_j,n_cut,norm,P,W,P1,P2,W1,W2";
  for (double nu : nus) os << "," << nu_label(nu);
  os << "\n";
  for (const auto& r : rows) {
    const MeasureReport& m = r.report;
    os << channel_name(r.channel) << "," << fmt17(r.lambda) << ",";
    if (!r.ok) {
      os << "nan,nan,nan,nan,nan,nan,nan,nan,nan";
      for (std::size_t k = 0; k < nus.size(); ++k) os << ",nan";
      os << "\n";
      continue;
    }
    os << m.two_j << "," << m.n_cut << "," << fmt17(m.norm) << "," << fmt17(m.P) << "," << fmt17(m.W) << ","
       << fmt17(m.P1) << "," << fmt17(m.P2) << "," << fmt17(m.W1) << "," << fmt17(m.W2);
    for (double nu : nus) os << "," << fmt17(m.moment(nu));
    os << "\n";
  }
  return os.str();
}

nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows, const std::vector<double>& nus) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["channel"] = channel_name(r.channel);
    o["lambda"] = r.lambda;
    if (!r.ok) {
      o["error"] = r.error;
      arr.push_back(o);
      continue;
    }
    const MeasureReport& m = r.report;
    o["two_j"] = m.two_j;
    o["n_cut"] = m.n_cut;
    o["norm"] = m.norm;
    o["P"] = m.P;
    o["W"] = m.W;
    o["P1"] = m.P1;
    o["P2"] = m.P2;
    o["W1"] = m.W1;
    o["W2"] = m.W2;
    for (double nu : nus) o[nu_label(nu)] = m.moment(nu);
    arr.push_back(o);
  }
  return arr;
}

std::vector<CompareRow> compare_rows(const std::vector<SweepRow>& rows, const DickeParams& base) {
  std::vector<CompareRow> out;
  const double lc = 0.5 * std::sqrt(base.omega * base.omega0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].channel != Channel::Numeric) continue;
    const SweepRow* var = nullptr;
    for (const auto& r : rows)
      if (r.channel == Channel::Variational && r.lambda == rows[i].lambda) var = &r;
    if (!var) continue;
    CompareRow c;
    c.lambda = rows[i].lambda;
    c.excluded = std::abs(c.lambda - lc) < 0.05 * lc;
    c.ok = rows[i].ok && var->ok;
    if (!c.ok) {
      c.error = !rows[i].ok ? rows[i].error : var->error;
      out.push_back(c);
      continue;
    }
    auto vals = [](const MeasureReport& m) { return std::array<double, 6>{m.P, m.W, m.P1, m.P2, m.W1, m.W2}; };
    c.numeric = vals(rows[i].report);
    c.variational = vals(var->report);
    for (int k = 0; k < 6; ++k) {
      c.abs_delta[k] = c.numeric[k] - c.variational[k];
      c.rel_delta[k] = std::abs(c.abs_delta[k]) / std::abs(c.variational[k]);
    }
    out.push_back(c);
  }
  return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  static const char* names[6] = {"P", "W", "P1", "P2", "W1", "W2"};
  std::ostringstream os;
  os << "lambda,excluded";
  for (auto n : names) os << "," << n << "_numeric," << n << "_variational," << n << "_abs_delta," << n << "_rel_delta";
  os << "\n";
  for (const auto& r : rows) {
    os << fmt17(r.lambda) << "," << (r.excluded ? 1 : 0);
    for (int k = 0; k < 6; ++k) {
      if (!r.ok) {
        os << ",nan,nan,nan,nan";
        continue;
      }
      os << "," << fmt17(r.numeric[k]) << "," << fmt17(r.variational[k]) << "," << fmt17(r.abs_delta[k]) << ","
         << fmt17(r.rel_delta[k]);
    }
    os << "\n";
  }
  return os.str();
}

ZeroSet compute_zero_set(const DickeParams& p, const Cell& cell) {
  ZeroSet z;
  z.lambda = p.lambda;
  z.two_j = p.two_j;
  z.cell = cell;
  z.lines = husimi_zero_lines(p, cell, ZeroPlane::Momentum);
  auto pos = husimi_zero_lines(p, cell, ZeroPlane::Position);
  z.lines.insert(z.lines.end(), pos.begin(), pos.end());
  return z;
}

std::vector<std::pair<double, int>> reference_zero_sets() { return {{0.6, 20}, {0.6, 200}, {10.0, 20}, {10.0, 200}}; }

std::string zeros_csv(const ZeroSet& s) {
  std::ostringstream os;
  os << "space,l,slope,intercept,seg_a_lo,seg_b_lo,seg_a_hi,seg_b_hi\n";
  for (const auto& z : s.lines)
    os << zero_plane_name(z.plane) << "," << z.l << "," << fmt17(z.slope) << "," << fmt17(z.intercept) << ","
       << fmt17(z.seg_a_lo) << "," << fmt17(z.seg_b_lo) << "," << fmt17(z.seg_a_hi) << "," << fmt17(z.seg_b_hi)
       << "\n";
  return os.str();
}

std::string zeros_file_stem(const ZeroSet& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "lambda%g_2j%d", s.lambda, s.two_j);
  return buf;
}

nlohmann::ordered_json zeros_summary(const std::vector<ZeroSet>& sets) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : sets) {
    nlohmann::ordered_json o;
    o["lambda"] = s.lambda;
    o["two_j"] = s.two_j;
    o["cell"] = {s.cell.a_lo, s.cell.a_hi, s.cell.b_lo, s.cell.b_hi};
    o["file"] = zeros_file_stem(s) + ".csv";
    int nm = 0, np = 0;
    for (const auto& z : s.lines) (z.plane == ZeroPlane::Momentum ? nm : np)++;
    o["momentum_count"] = nm;
    o["position_count"] = np;
    o["count"] = nm + np;
    arr.push_back(o);
  }
  return arr;
}

GridKind parse_grid_kind(const std::string& s) {
  if (s == "husimi") return GridKind::Husimi;
  if (s == "marginal1") return GridKind::Marginal1;
  if (s == "marginal2") return GridKind::Marginal2;
  if (s == "xi") return GridKind::Xi;
  if (s == "xi_tilde") return GridKind::XiTilde;
  throw ConfigError("unsupported plane spec '" + s + "'");
}

namespace {

double* axis_ref(PhasePoint& p, const std::string& name) {
  if (name == "alpha1") return &p.alpha1;
  if (name == "alpha2") return &p.alpha2;
  if (name == "beta1") return &p.beta1;
  if (name == "beta2") return &p.beta2;
  throw ConfigError("unknown axis '" + name + "'");
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

GridDump compute_grid(const SweepConfig& cfg, double lambda, const GridRequest& req) {
  if (req.resolution < 2) throw ConfigError("grid resolution must be >= 2");
  if (!(req.u_hi > req.u_lo && req.v_hi > req.v_lo)) throw ConfigError("grid bounds must be increasing");
  DickeParams p = cfg.base.with_lambda(lambda);
  std::vector<double> us = linspace(req.u_lo, req.u_hi, req.resolution);
  std::vector<double> vs = linspace(req.v_lo, req.v_hi, req.resolution);

  std::optional<GroundState> gs;
  std::unique_ptr<PhaseDensity> phi;
  if (req.channel == Channel::Numeric || req.kind == GridKind::Xi || req.kind == GridKind::XiTilde) {
    gs = sweep_ground_state(cfg, lambda);
    phi = std::make_unique<NumericHusimi>(*gs);
  } else {
    phi = std::make_unique<AnsatzHusimi>(AnsatzState::make(p));
  }

  GridDump d;
  std::ostringstream os;
  std::string cu, cv, cf;
  Eigen::MatrixXd vals(us.size(), vs.size());
  switch (req.kind) {
    case GridKind::Husimi: {
      if (req.axis_u == req.axis_v) throw ConfigError("slice axes must differ");
      cu = req.axis_u;
      cv = req.axis_v;
      cf = "phi";
      for (std::size_t i = 0; i < us.size(); ++i)
        for (std::size_t k = 0; k < vs.size(); ++k) {
          PhasePoint pt = req.fixed;
          *axis_ref(pt, req.axis_u) = us[i];
          *axis_ref(pt, req.axis_v) = vs[k];
          vals(i, k) = phi->value(pt);
        }
      break;
    }
    case GridKind::Marginal1:
    case GridKind::Marginal2: {
      const int kappa = req.kind == GridKind::Marginal1 ? 1 : 2;
      cu = kappa == 1 ? "alpha1" : "alpha2";
      cv = kappa == 1 ? "beta1" : "beta2";
      cf = "phi" + std::to_string(kappa);
      auto* ans = dynamic_cast<AnsatzHusimi*>(phi.get());
      for (std::size_t i = 0; i < us.size(); ++i)
        for (std::size_t k = 0; k < vs.size(); ++k)
          vals(i, k) = ans ? analytic_marginal_husimi(ans->state(), kappa, us[i], vs[k])
                           : marginal_husimi(*phi, kappa, us[i], vs[k], cfg.quad);
      break;
    }
    case GridKind::Xi:
    case GridKind::XiTilde: {
      SmearedDensities dens(*gs);
      const bool pos = req.kind == GridKind::Xi;
      cu = pos ? "x" : "kx";
      cv = pos ? "y" : "ky";
      cf = pos ? "xi" : "xi_tilde";
      vals = pos ? dens.position_grid(us, vs) : dens.momentum_grid(us, vs);
      break;
    }
  }
  if (req.kind == GridKind::Husimi) {
    os << "alpha1,alpha2,beta1,beta2,phi\n";
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t k = 0; k < vs.size(); ++k) {
        PhasePoint pt = req.fixed;
        *axis_ref(pt, req.axis_u) = us[i];
        *axis_ref(pt, req.axis_v) = vs[k];
        os << fmt17(pt.alpha1) << "," << fmt17(pt.alpha2) << "," << fmt17(pt.beta1) << "," << fmt17(pt.beta2) << ","
           << fmt17(vals(i, k)) << "\n";
      }
  } else {
    os << cu << "," << cv << "," << cf << "\n";
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t k = 0; k < vs.size(); ++k)
        os << fmt17(us[i]) << "," << fmt17(vs[k]) << "," << fmt17(vals(i, k)) << "\n";
  }
  d.csv = os.str();
  auto& m = d.meta;
  m["kind"] = cf;
  m["channel"] = channel_name(req.channel);
  m["axes"] = {cu, cv};
  m["bounds"] = {{req.u_lo, req.u_hi}, {req.v_lo, req.v_hi}};
  m["nodes"] = {req.resolution, req.resolution};
  m["order"] = "row-major, first axis outer";
  if (req.kind == GridKind::Husimi)
    m["fixed"] = {{"alpha1", req.fixed.alpha1}, {"alpha2", req.fixed.alpha2}, {"beta1", req.fixed.beta1},
                  {"beta2", req.fixed.beta2}};
  m["params"] = {{"omega", p.omega}, {"omega0", p.omega0}, {"lambda", p.lambda}, {"two_j", p.two_j},
                 {"n_cut", gs ? gs->params.n_cut : 0}};
  return d;
}

ConvergeReport run_converge(const DickeParams& base, double tol, int n_max, int step) {
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  ConvergeReport rep;
  // Replays the convergence loop so a failure still leaves the partial table.
  GroundState cur = ground_state(base.with_cutoff(0));
  for (int nc = 0; nc <= n_max; nc += step) {
    GroundState next = ground_state(base.with_cutoff(nc + step));
    CutoffStep st;
    st.n_cut = nc;
    st.energy = cur.energy;
    st.delta = cur.energy - next.energy;
    for (int n = nc + 1; n <= nc + step; ++n) st.leakage += next.coeffs.row(n).squaredNorm();
    st.chosen = std::abs(st.delta) < tol && st.leakage < tol;
    rep.trace.push_back(st);
    if (st.chosen) {
      rep.converged = true;
      rep.chosen = nc;
      return rep;
    }
    cur = std::move(next);
  }
  rep.error = "no converged cutoff up to n_c=" + std::to_string(n_max);
  return rep;
}

std::string converge_csv(const ConvergeReport& r) {
  std::ostringstream os;
  os << "n_cut,E0,delta_E,leakage,chosen\n";
  for (const auto& s : r.trace)
    os << s.n_cut << "," << fmt17(s.energy) << "," << fmt17(s.delta) << "," << fmt17(s.leakage) << ","
       << (s.chosen ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace dicke
