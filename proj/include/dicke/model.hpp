#pragma once

#include <Eigen/Sparse>
#include <cstddef>
#include <span>
#include <vector>

#include "dicke/params.hpp"

namespace dicke {

struct BasisState {
  int n = 0;
  int m_index = 0;  // j + m, in 0..2j
  bool operator==(const BasisState&) const = default;
};

// Lexicographic (n, m_index) basis of the truncated space.
class Basis {
 public:
  explicit Basis(const DickeParams& p);

  std::size_t size() const { return states_.size(); }
  const BasisState& operator[](std::size_t i) const { return states_[i]; }
  std::span<const BasisState> states() const { return states_; }
  std::size_t index_of(const BasisState& s) const;
  bool contains(const BasisState& s) const;
  int n_cut() const { return n_cut_; }
  int two_j() const { return two_j_; }

 private:
  int n_cut_, two_j_;
  std::vector<BasisState> states_;
};

Basis build_basis(const DickeParams& p);

inline int parity_sign(int n, int m_index) { return ((n + m_index) % 2 == 0) ? 1 : -1; }

double matrix_element(const BasisState& bra, const BasisState& ket, const DickeParams& p);

constexpr std::size_t kDefaultDimensionCap = 4'000'000;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMatrix assemble_hamiltonian(const DickeParams& p, std::size_t dim_cap = kDefaultDimensionCap);

// Restriction of H to one parity sector. `members[i]` is the full-basis index
// of block row i.
struct ParityBlock {
  SparseMatrix matrix;
  std::vector<std::size_t> members;
  int parity = 1;
};

ParityBlock assemble_parity_block(const DickeParams& p, int parity,
                                  std::size_t dim_cap = kDefaultDimensionCap);

// Applies the parity operator (sign flip on odd basis states).
Eigen::VectorXd apply_parity(const Basis& b, const Eigen::VectorXd& v);

}  // namespace dicke
