#pragma once

#include <array>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dicke/ground_state.hpp"
#include "dicke/measures.hpp"
#include "dicke/variational.hpp"

namespace dicke {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitPartial = 4 };

struct SweepConfig {
  DickeParams base;             // lambda is taken from the grid
  std::optional<int> n_cut;     // fixed cutoff; automatic convergence when empty
  std::vector<double> lambda_grid;
  std::vector<Channel> channels{Channel::Numeric};
  std::vector<double> nus = kDefaultNus;
  QuadratureSpec quad;
  double solver_tol = 1e-12;
  double energy_tol = 1e-8;     // converge_cutoff tolerance
  int n_cut_max = 400;
  int cutoff_step = 10;
  std::string output;           // empty: stdout
  std::string format = "csv";   // csv | json
  std::string cache_dir;        // empty: no cache
  int workers = 1;

  void validate() const;  // throws ConfigError
};

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_lambda_grid(const std::string& s);
// 0..1 step 0.02, refined to step 0.005 inside [0.4, 0.6].
std::vector<double> default_lambda_grid();

// Reads a JSON document mirroring SweepConfig (keys: omega, omega0, two_j, n_cut,
// lambda_grid, channels, nu, nodes, box_halfwidth, scheme, tol, energy_tol, n_cut_max, out,
// format, cache_dir, workers).
SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig base = {});

struct SweepRow {
  Channel channel = Channel::Numeric;
  double lambda = 0.0;
  bool ok = false;
  std::string error;
  MeasureReport report;
};

// One row per (lambda, channel), ordered by lambda then channel.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

// Ground state for one lambda honoring the cutoff policy and cache of cfg.
GroundState sweep_ground_state(const SweepConfig& cfg, double lambda, std::vector<CutoffStep>* trace = nullptr);

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<double>& nus);
nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows, const std::vector<double>& nus);

struct CompareRow {
  double lambda = 0.0;
  bool ok = false;
  std::string error;
  bool excluded = false;  // |lambda - lambda_c| < 0.05 lambda_c
  // numeric, variational, abs delta, rel delta for P, W, P1, P2, W1, W2
  std::array<double, 6> numeric{}, variational{}, abs_delta{}, rel_delta{};
};

std::vector<CompareRow> compare_rows(const std::vector<SweepRow>& rows, const DickeParams& base);
std::string compare_csv(const std::vector<CompareRow>& rows);

struct ZeroSet {
  double lambda = 0.0;
  int two_j = 0;
  Cell cell;
  std::vector<ZeroLine> lines;  // momentum plane then position plane
};

ZeroSet compute_zero_set(const DickeParams& p, const Cell& cell);
// The four parameter sets (lambda, 2j) = (0.6, 20), (0.6, 200), (10, 20), (10, 200) at omega = omega0 = 1.
std::vector<std::pair<double, int>> reference_zero_sets();
// One CSV per parameter set; the file name stem encodes (lambda, 2j).
std::string zeros_csv(const ZeroSet& set);
std::string zeros_file_stem(const ZeroSet& set);
nlohmann::ordered_json zeros_summary(const std::vector<ZeroSet>& sets);

enum class GridKind { Husimi, Marginal1, Marginal2, Xi, XiTilde };
GridKind parse_grid_kind(const std::string& s);

struct GridRequest {
  GridKind kind = GridKind::Husimi;
  Channel channel = Channel::Numeric;
  // Husimi slices: the two varying axes among alpha1, alpha2, beta1, beta2 and
  // fixed values of the others.
  std::string axis_u = "alpha1", axis_v = "beta1";
  PhasePoint fixed;
  double u_lo = -4, u_hi = 4, v_lo = -4, v_hi = 4;
  int resolution = 41;
};

struct GridDump {
  std::string csv;
  nlohmann::ordered_json meta;
};

GridDump compute_grid(const SweepConfig& cfg, double lambda, const GridRequest& req);

struct ConvergeReport {
  std::vector<CutoffStep> trace;
  bool converged = false;
  int chosen = -1;
  std::string error;
};

ConvergeReport run_converge(const DickeParams& base, double tol, int n_max, int step = 10);
std::string converge_csv(const ConvergeReport& r);

// Formats a double deterministically with 17 significant digits.
std::string fmt17(double v);

}  // namespace dicke
