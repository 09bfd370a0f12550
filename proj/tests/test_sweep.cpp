#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "dicke/errors.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.base = DickeParams::make(1, 1, 0, 4, 0);
  c.n_cut = 30;
  c.lambda_grid = {0.0, 0.3, 0.7, 1.0};
  c.channels = {Channel::Numeric, Channel::Variational};
  c.quad.nodes_per_axis = 41;
  return c;
}

}  // namespace

TEST_CASE("lambda grid parsing and defaults") {
  auto g = parse_lambda_grid("0:1:0.25");
  REQUIRE(g.size() == 5);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(parse_lambda_grid("0.1,0.4,0.9") == std::vector<double>{0.1, 0.4, 0.9});
  CHECK_THROWS_AS(parse_lambda_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_lambda_grid("a,b"), ConfigError);
  auto d = default_lambda_grid();
  CHECK(d.front() == 0.0);
  CHECK(d.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < d.size(); ++i) {
    double step = d[i] - d[i - 1];
    bool fine = d[i] > 0.4 + 1e-9 && d[i] <= 0.6 + 1e-9;
    CHECK(step == doctest::Approx(fine ? 0.005 : 0.02).epsilon(1e-6));
  }
}

TEST_CASE("config validation") {
  auto c = small_config();
  c.lambda_grid.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.lambda_grid = {0.5, 0.2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.workers = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.nus = {1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  nlohmann::json j = {{"two_j", 6}, {"lambda_grid", "0:0.5:0.25"}, {"channels", {"variational"}}, {"workers", 3}};
  auto f = sweep_config_from_json(j, small_config());
  CHECK(f.base.two_j == 6);
  CHECK(f.lambda_grid.size() == 3);
  CHECK(f.channels == std::vector<Channel>{Channel::Variational});
  CHECK(f.workers == 3);
  CHECK_THROWS_AS(sweep_config_from_json(nlohmann::json{{"two_j", "x"}}), ConfigError);
}

TEST_CASE("sweep output is deterministic and worker-count independent") {
  auto c = small_config();
  c.workers = 1;
  auto a = sweep_csv(run_sweep(c), c.nus);
  c.workers = 3;
  auto b = sweep_csv(run_sweep(c), c.nus);
  c.workers = 8;
  auto rows = run_sweep(c);
  CHECK(a == b);
  CHECK(a == sweep_csv(rows, c.nus));
  CHECK(a.rfind("channel,lambda,two_j,n_cut,norm,P,W,P1,P2,W1,W2,M_0.5,M_1.5,M_2,M_3,M_4\n", 0) == 0);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].lambda == 0.0);
  CHECK(rows[0].channel == Channel::Numeric);
  CHECK(rows[1].channel == Channel::Variational);
  auto js = sweep_json(rows, c.nus);
  CHECK(js.size() == 8);
  CHECK(js[0]["P"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("failed lambda points become error rows") {
  auto c = small_config();
  c.n_cut.reset();
  c.n_cut_max = 10;
  c.lambda_grid = {0.0, 1.5};
  c.channels = {Channel::Numeric};
  auto rows = run_sweep(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  CHECK(rows[1].error.find("cutoff") != std::string::npos);
  auto csv = sweep_csv(rows, c.nus);
  CHECK(csv.find("numeric,1.5,nan") != std::string::npos);
}

TEST_CASE("comparison rows") {
  auto c = small_config();
  c.lambda_grid = {0.0, 0.5, 1.0};
  auto cmp = compare_rows(run_sweep(c), c.base);
  REQUIRE(cmp.size() == 3);
  for (double d : cmp[0].abs_delta) CHECK(std::abs(d) < 1e-10);
  CHECK(cmp[1].excluded);
  CHECK_FALSE(cmp[2].excluded);
  auto csv = compare_csv(cmp);
  CHECK(csv.rfind("lambda,excluded,P_numeric", 0) == 0);
}

TEST_CASE("zero sets") {
  auto sets = reference_zero_sets();
  REQUIRE(sets.size() == 4);
  auto normal = compute_zero_set(DickeParams::make(1, 1, 0.3, 20, 0), Cell{});
  CHECK(normal.lines.empty());
  CHECK(zeros_csv(normal) == "space,l,slope,intercept,seg_a_lo,seg_b_lo,seg_a_hi,seg_b_hi\n");
  auto sr = compute_zero_set(DickeParams::make(1, 1, 10.0, 20, 0), Cell{});
  auto s = zeros_summary({normal, sr});
  CHECK(s[0]["count"].get<int>() == 0);
  CHECK(s[1]["count"].get<int>() > 0);
}

TEST_CASE("grid dumps") {
  auto c = small_config();
  GridRequest r;
  r.kind = GridKind::Husimi;
  r.axis_u = "alpha1";
  r.axis_v = "alpha2";
  r.u_lo = r.v_lo = -2;
  r.u_hi = r.v_hi = 2;
  r.resolution = 5;
  auto d = compute_grid(c, 0.0, r);
  CHECK(d.csv.rfind("alpha1,alpha2,beta1,beta2,phi\n", 0) == 0);
  CHECK(d.csv.find("0,0,0,0,1") != std::string::npos);
  CHECK(d.meta["nodes"][0].get<int>() == 5);

  r.resolution = 1;
  CHECK_THROWS_AS(compute_grid(c, 0.0, r), ConfigError);
  CHECK_THROWS_AS(parse_grid_kind("wigner"), ConfigError);

  // Superradiant position marginal peaks at the displaced packets.
  GridRequest m;
  m.kind = GridKind::Marginal1;
  m.channel = Channel::Variational;
  m.u_lo = m.v_lo = -4;
  m.u_hi = m.v_hi = 4;
  m.resolution = 81;
  auto eq = equilibrium(c.base.with_lambda(1.0));
  auto g = compute_grid(c, 1.0, m);
  std::istringstream in(g.csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha1,beta1,phi1");
  double best = -1, bu = 0, bv = 0;
  while (std::getline(in, line)) {
    double u, v, f;
    char comma;
    std::istringstream ls(line);
    ls >> u >> comma >> v >> comma >> f;
    if (f > best + 1e-15) best = f, bu = u, bv = v;
  }
  CHECK(std::abs(std::abs(bu) - std::abs(eq.alpha_e)) <= 0.1);
  CHECK(std::abs(std::abs(bv) - std::abs(eq.beta_e)) <= 0.1);
  CHECK(bu * bv * eq.alpha_e * eq.beta_e > 0);  // packets at +-(alpha_e, beta_e)
}

TEST_CASE("convergence report") {
  auto r = run_converge(DickeParams::make(1, 1, 0.0, 20, 0), 1e-8, 100);
  CHECK(r.converged);
  CHECK(r.chosen == 0);
  auto bad = run_converge(DickeParams::make(1, 1, 2.0, 20, 0), 1e-8, 20);
  CHECK_FALSE(bad.converged);
  CHECK(bad.trace.size() == 3);
  CHECK(converge_csv(bad).rfind("n_cut,E0,delta_E,leakage,chosen\n", 0) == 0);
  CHECK_THROWS_AS(run_converge(DickeParams::make(1, 1, 0.0, 20, 0), 0.0, 10), ConfigError);
}
