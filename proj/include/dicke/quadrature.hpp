#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dicke/phase_point.hpp"

namespace dicke {

enum class Scheme { Trapezoid, GaussHermite };

struct QuadratureSpec {
  Scheme scheme = Scheme::Trapezoid;
  int nodes_per_axis = 57;     // nodes across one window of width 2 * box_halfwidth
  double box_halfwidth = 8.0;  // half-width of each window around a packet center
  double target_tol = 1e-8;

  void validate() const;
  // Trapezoid spacing implied by the spec.
  double spacing() const { return 2.0 * box_halfwidth / (nodes_per_axis - 1); }
};

// One-dimensional rule. Weights integrate f directly (any Gaussian factor is
// already folded in). `edge` marks nodes on the outer boundary.
struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<unsigned char> edge;
  std::size_t size() const { return nodes.size(); }
};

// Packet centers per axis; windows [c - L, c + L] are merged.
struct PacketLayout {
  std::vector<double> alpha1{0.0}, alpha2{0.0}, beta1{0.0}, beta2{0.0};
  static PacketLayout symmetric(double alpha_center, double beta_center);
};

struct ProductGrid {
  AxisRule alpha1, alpha2, beta1, beta2;
  std::size_t slab_size() const { return alpha2.size() * beta1.size() * beta2.size(); }
  std::size_t size() const { return alpha1.size() * slab_size(); }
};

AxisRule make_axis_rule(const QuadratureSpec& q, std::span<const double> centers);
ProductGrid make_grid(const QuadratureSpec& q, const PacketLayout& layout);

// Evaluates one alpha1 slab of the grid into out[(p * N_beta1 + q) * N_beta2 + r]
// for alpha2 node p, beta1 node q, beta2 node r. Must be callable concurrently.
class SlabEvaluator {
 public:
  virtual ~SlabEvaluator() = default;
  virtual void slab(std::size_t alpha1_index, double* out) const = 0;
};

// A nonnegative density on the contracted phase space, normalized against d^4/pi^2.
class PhaseDensity {
 public:
  virtual ~PhaseDensity() = default;
  virtual double value(const PhasePoint& p) const = 0;
  virtual PacketLayout layout() const { return {}; }
  // Default evaluator calls value() pointwise.
  virtual std::unique_ptr<SlabEvaluator> bind(const ProductGrid& g) const;
};

struct GridIntegrals {
  double norm = 0.0;             // int Phi d^4/pi^2
  std::vector<double> nus;
  std::vector<double> moments;   // int Phi^nu d^4/pi^2
  double wehrl = 0.0;            // -int Phi ln Phi d^4/pi^2
  double peak = 0.0;
  Eigen::MatrixXd marginal1;     // Phi_1 on (alpha1, beta1) nodes
  Eigen::MatrixXd marginal2;     // Phi_2 on (alpha2, beta2) nodes
  std::array<double, 4> edge_max{};  // largest Phi on the boundary of each axis
};

extern const std::array<const char*, 4> kAxisNames;

// OpenMP kernel over alpha1 slabs. Reductions are stored per slab and combined
// in a fixed order, so results do not depend on the thread count.
// `threads` <= 0 means the OpenMP default.
GridIntegrals integrate_grid(const PhaseDensity& phi, const ProductGrid& g, std::span<const double> nus,
                             int threads = 0);

// Serial pointwise reference: calls value() on every node in plain loops.
GridIntegrals integrate_grid_serial(const PhaseDensity& phi, const ProductGrid& g, std::span<const double> nus);

// Throws CoverageError when any boundary carries more than `ratio` of the peak.
void check_coverage(const GridIntegrals& r, double ratio);

}  // namespace dicke
