#include "dicke/cache.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string cache_key(const DickeParams& p) {
  return "w" + g17(p.omega) + "_w0" + g17(p.omega0) + "_l" + g17(p.lambda) + "_tj" + std::to_string(p.two_j) +
         "_nc" + std::to_string(p.n_cut);
}

std::string write_ground_state_json(const GroundState& gs, double tol) {
  nlohmann::ordered_json h;
  h["format_version"] = kCacheFormatVersion;
  h["omega"] = g17(gs.params.omega);
  h["omega0"] = g17(gs.params.omega0);
  h["lambda"] = g17(gs.params.lambda);
  h["two_j"] = gs.params.two_j;
  h["n_cut"] = gs.params.n_cut;
  h["energy"] = g17(gs.energy);
  h["parity"] = gs.parity;
  h["residual"] = g17(gs.residual);
  h["solver_tol"] = g17(tol);
  std::ostringstream os;
  os << "{\"header\":" << h.dump() << ",\"coefficients\":[";
  bool first = true;
  for (int n = 0; n < gs.coeffs.rows(); ++n)
    for (int k = 0; k < gs.coeffs.cols(); ++k) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17e", gs.coeffs(n, k));
      os << (first ? "" : ",") << buf;
      first = false;
    }
  os << "]}\n";
  return os.str();
}

GroundState read_ground_state_json(const std::string& text, double* tol) {
  auto j = nlohmann::json::parse(text);
  const auto& h = j.at("header");
  if (h.at("format_version").get<int>() != kCacheFormatVersion) throw std::runtime_error("cache format version mismatch");
  auto num = [&](const char* k) { return std::stod(h.at(k).get<std::string>()); };
  GroundState gs;
  gs.params = DickeParams::make(num("omega"), num("omega0"), num("lambda"), h.at("two_j").get<int>(),
                                h.at("n_cut").get<int>());
  gs.energy = num("energy");
  gs.parity = h.at("parity").get<int>();
  gs.residual = num("residual");
  if (tol) *tol = num("solver_tol");
  const auto& c = j.at("coefficients");
  const int rows = gs.params.n_cut + 1, cols = gs.params.two_j + 1;
  if (c.size() != static_cast<std::size_t>(rows) * cols) throw std::runtime_error("cache coefficient count mismatch");
  gs.coeffs.resize(rows, cols);
  std::size_t idx = 0;
  for (int n = 0; n < rows; ++n)
    for (int k = 0; k < cols; ++k) gs.coeffs(n, k) = c[idx++].get<double>();
  return gs;
}

GroundStateCache::GroundStateCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path GroundStateCache::path_for(const DickeParams& p) const {
  return dir_ / ("gs_" + cache_key(p) + ".json");
}

std::optional<GroundState> GroundStateCache::load(const DickeParams& p, double tol) const {
  auto path = path_for(p);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    double stored_tol = 0.0;
    GroundState gs = read_ground_state_json(ss.str(), &stored_tol);
    if (cache_key(gs.params) != cache_key(p) || stored_tol > tol) return std::nullopt;
    return gs;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entries are recomputed and overwritten
  }
}

void GroundStateCache::store(const GroundState& gs, double tol) const {
  static std::atomic<unsigned> counter{0};
  auto path = path_for(gs.params);
  std::ostringstream tmpname;
  tmpname << path.string() << ".tmp." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id())
          << "." << counter++;
  {
    std::ofstream out(tmpname.str(), std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmpname.str());
    out << write_ground_state_json(gs, tol);
    if (!out) throw std::runtime_error("cache write failed for " + tmpname.str());
  }
  std::filesystem::rename(tmpname.str(), path);
}

GroundState GroundStateCache::get_or_compute(const DickeParams& p, double tol) const {
  if (auto gs = load(p, tol)) return *gs;
  GroundState gs = ground_state(p, tol);
  store(gs, tol);
  return gs;
}

}  // namespace dicke
