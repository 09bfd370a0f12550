#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dicke/ground_state.hpp"

namespace dicke {

constexpr int kCacheFormatVersion = 1;
constexpr const char* kCacheEnvVar = "DICKE_HUSIMI_CACHE";

// Exact decimal rendering (%.17g) of the cache key fields.
std::string cache_key(const DickeParams& p);

std::string write_ground_state_json(const GroundState& gs, double tol);
GroundState read_ground_state_json(const std::string& text, double* tol = nullptr);

// One file per (omega, omega0, lambda, 2j, n_c). Writes go to a temporary file
// and are renamed into place, so concurrent writers of one key are safe.
class GroundStateCache {
 public:
  explicit GroundStateCache(std::filesystem::path dir);
  std::filesystem::path path_for(const DickeParams& p) const;
  std::optional<GroundState> load(const DickeParams& p, double tol) const;
  void store(const GroundState& gs, double tol) const;
  GroundState get_or_compute(const DickeParams& p, double tol) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace dicke
