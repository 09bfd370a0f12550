#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "dicke/cache.hpp"
#include "dicke/coherent.hpp"
#include "dicke/measures.hpp"

using namespace dicke;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  fs::path d = fs::temp_directory_path() / (std::string("dicke_test_") + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("ground state JSON round trip is bit exact") {
  auto gs = ground_state(DickeParams::make(1, 1, 0.9, 6, 25));
  double tol = 0.0;
  auto back = read_ground_state_json(write_ground_state_json(gs, 1e-12), &tol);
  CHECK(tol == 1e-12);
  CHECK(back.energy == gs.energy);
  CHECK(back.params.lambda == gs.params.lambda);
  CHECK(back.params.n_cut == gs.params.n_cut);
  CHECK((back.coeffs - gs.coeffs).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(read_ground_state_json("{\"format_version\": 99}"));
  CHECK_THROWS(read_ground_state_json("not json"));
}

TEST_CASE("cache stores, reloads and reproduces measures") {
  auto dir = scratch_dir("cache");
  GroundStateCache cache(dir);
  auto p = DickeParams::make(1, 1, 0.7, 6, 30);
  CHECK_FALSE(cache.load(p, 1e-12).has_value());
  auto fresh = cache.get_or_compute(p, 1e-12);
  CHECK(fs::exists(cache.path_for(p)));
  auto loaded = cache.load(p, 1e-12);
  REQUIRE(loaded.has_value());
  // A looser stored tolerance does not satisfy a stricter request.
  CHECK_FALSE(cache.load(p, 1e-14).has_value());
  QuadratureSpec q;
  auto a = measure_report(NumericHusimi(fresh), q, kDefaultNus);
  auto b = measure_report(NumericHusimi(*loaded), q, kDefaultNus);
  CHECK(std::abs(a.P - b.P) <= 1e-12);
  CHECK(std::abs(a.W - b.W) <= 1e-12);
  CHECK(std::abs(a.P2 - b.P2) <= 1e-12);
  // Distinct parameters map to distinct files.
  CHECK(cache.path_for(p) != cache.path_for(p.with_lambda(0.7000000001)));
  CHECK(cache_key(p) == cache_key(DickeParams::make(1, 1, 0.7, 6, 30)));
  fs::remove_all(dir);
}

TEST_CASE("corrupt cache entries are recomputed") {
  auto dir = scratch_dir("corrupt");
  GroundStateCache cache(dir);
  auto p = DickeParams::make(1, 1, 0.2, 2, 8);
  {
    std::ofstream f(cache.path_for(p));
    f << "{ truncated";
  }
  auto gs = cache.get_or_compute(p, 1e-12);
  CHECK(gs.energy == doctest::Approx(ground_state(p).energy));
  fs::remove_all(dir);
}
