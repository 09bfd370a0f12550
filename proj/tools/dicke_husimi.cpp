// Command-line driver: sweep, compare, zeros, grid, converge.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dicke/cache.hpp"
#include "dicke/errors.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<double> omega, omega0;
  std::optional<int> two_j, n_cut, n_cut_max, nodes, workers;
  std::optional<std::string> lambda_grid, channels, nu, out, format, cache_dir;
  std::optional<double> tol;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file (flags override its keys)");
    app->add_option("--omega", omega, "field frequency");
    app->add_option("--omega0", omega0, "atomic frequency");
    app->add_option("--two-j", two_j, "twice the pseudospin j");
    app->add_option("--n-cut", n_cut, "photon cutoff (automatic convergence when omitted)");
    app->add_option("--n-cut-max", n_cut_max, "largest cutoff tried by automatic convergence");
    app->add_option("--lambda-grid", lambda_grid, "lo:hi:step or comma list");
    app->add_option("--channels", channels, "numeric,variational");
    app->add_option("--nu", nu, "comma list of Renyi orders");
    app->add_option("--nodes", nodes, "quadrature nodes per axis");
    app->add_option("--tol", tol, "quadrature norm tolerance");
    app->add_option("--out", out, "output path (default stdout)");
    app->add_option("--format", format, "csv or json");
    app->add_option("--cache-dir", cache_dir, "ground-state cache directory");
    app->add_option("--workers", workers, "parallel lambda workers");
  }

  SweepConfig build() const {
    SweepConfig c;
    c.base = DickeParams::make(1.0, 1.0, 0.0, 20, 0);
    c.lambda_grid = default_lambda_grid();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw ConfigError("cannot open config file " + config);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
      }
      c = sweep_config_from_json(j, c);
    }
    if (const char* env = std::getenv(kCacheEnvVar)) c.cache_dir = env;
    if (omega) c.base.omega = *omega;
    if (omega0) c.base.omega0 = *omega0;
    if (two_j) c.base.two_j = *two_j;
    if (n_cut) c.n_cut = *n_cut;
    if (n_cut_max) c.n_cut_max = *n_cut_max;
    if (lambda_grid) c.lambda_grid = parse_lambda_grid(*lambda_grid);
    if (channels) {
      c.channels.clear();
      std::stringstream ss(*channels);
      std::string t;
      while (std::getline(ss, t, ','))
        if (!t.empty()) c.channels.push_back(parse_channel(t));
    }
    if (nu) c.nus = parse_list(*nu);
    if (nodes) c.quad.nodes_per_axis = *nodes;
    if (tol) c.quad.target_tol = *tol;
    if (out) c.output = *out;
    if (format) c.format = *format;
    if (cache_dir) c.cache_dir = *cache_dir;
    if (workers) c.workers = *workers;
    return c;
  }

  static std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ',')) {
      if (t.empty()) continue;
      try {
        v.push_back(std::stod(t));
      } catch (const std::logic_error&) {
        throw ConfigError("bad number '" + t + "'");
      }
    }
    return v;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

std::vector<double> fixed_list(const std::string& s, std::size_t n, const char* what) {
  auto v = CommonFlags::parse_list(s);
  if (v.size() != n) throw ConfigError(std::string(what) + " needs " + std::to_string(n) + " values");
  return v;
}

int sweep_status(const std::vector<SweepRow>& rows) {
  std::size_t bad = 0;
  for (const auto& r : rows)
    if (!r.ok) {
      ++bad;
      std::fprintf(stderr, "lambda=%s channel=%s failed: %s\n", fmt17(r.lambda).c_str(), channel_name(r.channel).c_str(),
                   r.error.c_str());
    }
  if (bad == 0) return kExitOk;
  return bad == rows.size() ? kExitNumerical : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Husimi phase-space measures of the Dicke model ground state"};
  app.require_subcommand(1);

  CommonFlags sweep_f, cmp_f, grid_f, conv_f;
  auto* sweep = app.add_subcommand("sweep", "measures over a lambda grid");
  sweep_f.attach(sweep);

  auto* compare = app.add_subcommand("compare", "numeric vs variational deltas");
  cmp_f.attach(compare);

  auto* zeros = app.add_subcommand("zeros", "zero lines of the variational Husimi function");
  std::string z_cell = "-1,1,-1,1", z_out = "zeros";
  std::optional<double> z_lambda, z_omega, z_omega0;
  std::optional<int> z_two_j;
  zeros->add_option("--cell", z_cell, "a_lo,a_hi,b_lo,b_hi");
  zeros->add_option("--lambda", z_lambda, "extra parameter set: coupling");
  zeros->add_option("--two-j", z_two_j, "extra parameter set: 2j");
  zeros->add_option("--omega", z_omega);
  zeros->add_option("--omega0", z_omega0);
  zeros->add_option("--out", z_out, "output prefix: <out>_<set>.csv per set and <out>_summary.json");

  auto* grid = app.add_subcommand("grid", "Husimi, marginal or smeared-density grid dump");
  grid_f.attach(grid);
  std::string g_kind = "husimi", g_channel = "numeric", g_axes = "alpha1,beta1", g_fixed = "0,0,0,0",
              g_bounds = "-4,4,-4,4";
  double g_lambda = 0.0;
  int g_res = 41;
  grid->add_option("--lambda", g_lambda, "coupling");
  grid->add_option("--kind", g_kind, "husimi | marginal1 | marginal2 | xi | xi_tilde");
  grid->add_option("--channel", g_channel, "numeric | variational");
  grid->add_option("--axes", g_axes, "two of alpha1,alpha2,beta1,beta2 (husimi slices)");
  grid->add_option("--fixed", g_fixed, "alpha1,alpha2,beta1,beta2 values of the fixed axes");
  grid->add_option("--bounds", g_bounds, "u_lo,u_hi,v_lo,v_hi");
  grid->add_option("--resolution", g_res, "nodes per axis (>= 2)");

  auto* converge = app.add_subcommand("converge", "photon cutoff convergence table");
  conv_f.attach(converge);
  double c_lambda = 0.0, c_etol = 1e-8;
  int c_nmax = 400, c_step = 10;
  converge->add_option("--lambda", c_lambda, "coupling");
  converge->add_option("--energy-tol", c_etol, "energy and leakage tolerance");
  converge->add_option("--n-max", c_nmax, "largest cutoff tried");
  converge->add_option("--step", c_step, "cutoff increment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sweep) {
      SweepConfig cfg = sweep_f.build();
      auto rows = run_sweep(cfg);
      if (cfg.format == "json") emit(cfg.output, sweep_json(rows, cfg.nus).dump(2) + "\n");
      else emit(cfg.output, sweep_csv(rows, cfg.nus));
      return sweep_status(rows);
    }
    if (*compare) {
      SweepConfig cfg = cmp_f.build();
      cfg.channels = {Channel::Numeric, Channel::Variational};
      auto rows = run_sweep(cfg);
      emit(cfg.output, compare_csv(compare_rows(rows, cfg.base)));
      return sweep_status(rows);
    }
    if (*zeros) {
      auto c = fixed_list(z_cell, 4, "--cell");
      Cell cell{c[0], c[1], c[2], c[3]};
      if (!(cell.a_hi > cell.a_lo && cell.b_hi > cell.b_lo)) throw ConfigError("cell bounds must be increasing");
      std::vector<std::pair<double, int>> sets = reference_zero_sets();
      if (z_lambda || z_two_j) sets.emplace_back(z_lambda.value_or(0.6), z_two_j.value_or(20));
      std::vector<ZeroSet> out;
      for (auto [l, tj] : sets) {
        auto p = DickeParams::make(z_omega.value_or(1.0), z_omega0.value_or(1.0), l, tj, 0);
        out.push_back(compute_zero_set(p, cell));
      }
      for (const auto& z : out) emit(z_out + "_" + zeros_file_stem(z) + ".csv", zeros_csv(z));
      std::string summary = zeros_summary(out).dump(2) + "\n";
      emit(z_out + "_summary.json", summary);
      std::cout << summary;
      return kExitOk;
    }
    if (*grid) {
      SweepConfig cfg = grid_f.build();
      GridRequest req;
      req.kind = parse_grid_kind(g_kind);
      req.channel = parse_channel(g_channel);
      auto ax = g_axes.find(',');
      if (ax == std::string::npos) throw ConfigError("--axes needs two names");
      req.axis_u = g_axes.substr(0, ax);
      req.axis_v = g_axes.substr(ax + 1);
      auto f = fixed_list(g_fixed, 4, "--fixed");
      req.fixed = PhasePoint{f[0], f[1], f[2], f[3]};
      auto b = fixed_list(g_bounds, 4, "--bounds");
      req.u_lo = b[0];
      req.u_hi = b[1];
      req.v_lo = b[2];
      req.v_hi = b[3];
      req.resolution = g_res;
      GridDump d = compute_grid(cfg, g_lambda, req);
      emit(cfg.output, d.csv);
      std::string meta = d.meta.dump(2) + "\n";
      if (cfg.output.empty()) std::cerr << meta;
      else emit(cfg.output + ".meta.json", meta);
      return kExitOk;
    }
    if (*converge) {
      SweepConfig cfg = conv_f.build();
      ConvergeReport r = run_converge(cfg.base.with_lambda(c_lambda), c_etol, c_nmax, c_step);
      emit(cfg.output, converge_csv(r));
      if (!r.converged) {
        std::fprintf(stderr, "%s\n", r.error.c_str());
        return kExitNumerical;
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
