#include "dicke/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

Basis::Basis(const DickeParams& p) : n_cut_(p.n_cut), two_j_(p.two_j) {
  p.validate();
  states_.reserve(static_cast<std::size_t>(n_cut_ + 1) * (two_j_ + 1));
  for (int n = 0; n <= n_cut_; ++n)
    for (int mi = 0; mi <= two_j_; ++mi) states_.push_back({n, mi});
}

bool Basis::contains(const BasisState& s) const {
  return s.n >= 0 && s.n <= n_cut_ && s.m_index >= 0 && s.m_index <= two_j_;
}

std::size_t Basis::index_of(const BasisState& s) const {
  if (!contains(s))
    throw std::out_of_range("basis state (" + std::to_string(s.n) + "," + std::to_string(s.m_index) +
                            ") outside truncated basis");
  return static_cast<std::size_t>(s.n) * (two_j_ + 1) + s.m_index;
}

Basis build_basis(const DickeParams& p) { return Basis(p); }

double matrix_element(const BasisState& bra, const BasisState& ket, const DickeParams& p) {
  p.validate();
  auto in_range = [&](const BasisState& s) {
    return s.n >= 0 && s.n <= p.n_cut && s.m_index >= 0 && s.m_index <= p.two_j;
  };
  if (!in_range(bra) || !in_range(ket)) throw std::out_of_range("matrix_element: state outside basis");

  const int n = ket.n, mi = ket.m_index;
  double value = 0.0;
  if (bra == ket) value += n * p.omega + (mi - 0.5 * p.two_j) * p.omega0;

  double field = 0.0;
  if (bra.n == n + 1) field = std::sqrt(n + 1.0);
  else if (bra.n == n - 1) field = std::sqrt(static_cast<double>(n));
  double spin = 0.0;
  // j(j+1) - m(m+1) = (2j - m_index)(m_index + 1); j(j+1) - m(m-1) = m_index(2j - m_index + 1)
  if (bra.m_index == mi + 1) spin = std::sqrt(static_cast<double>(p.two_j - mi) * (mi + 1));
  else if (bra.m_index == mi - 1) spin = std::sqrt(static_cast<double>(mi) * (p.two_j - mi + 1));
  value += p.lambda / std::sqrt(static_cast<double>(p.two_j)) * field * spin;
  return value;
}

namespace {

void check_cap(const DickeParams& p, std::size_t cap) {
  std::size_t dim = static_cast<std::size_t>(p.n_cut + 1) * (p.two_j + 1);
  if (dim > cap)
    throw std::length_error("Hilbert-space dimension " + std::to_string(dim) + " exceeds cap " +
                            std::to_string(cap));
}

}  // namespace

SparseMatrix assemble_hamiltonian(const DickeParams& p, std::size_t dim_cap) {
  p.validate();
  check_cap(p, dim_cap);
  Basis b(p);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(b.size() * 5);
  for (std::size_t k = 0; k < b.size(); ++k) {
    const BasisState ket = b[k];
    trip.emplace_back(k, k, matrix_element(ket, ket, p));
    if (p.lambda == 0.0) continue;
    for (int dn : {-1, 1})
      for (int dm : {-1, 1}) {
        BasisState bra{ket.n + dn, ket.m_index + dm};
        if (!b.contains(bra)) continue;
        double v = matrix_element(bra, ket, p);
        if (v != 0.0) trip.emplace_back(b.index_of(bra), k, v);
      }
  }
  SparseMatrix h(b.size(), b.size());
  h.setFromTriplets(trip.begin(), trip.end());
  h.makeCompressed();
  return h;
}

ParityBlock assemble_parity_block(const DickeParams& p, int parity, std::size_t dim_cap) {
  p.validate();
  check_cap(p, dim_cap);
  if (parity != 1 && parity != -1) throw std::invalid_argument("parity must be +1 or -1");
  Basis b(p);
  ParityBlock blk;
  blk.parity = parity;
  std::vector<long> local(b.size(), -1);
  for (std::size_t k = 0; k < b.size(); ++k)
    if (parity_sign(b[k].n, b[k].m_index) == parity) {
      local[k] = static_cast<long>(blk.members.size());
      blk.members.push_back(k);
    }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(blk.members.size() * 5);
  for (std::size_t r = 0; r < blk.members.size(); ++r) {
    const BasisState ket = b[blk.members[r]];
    trip.emplace_back(r, r, matrix_element(ket, ket, p));
    if (p.lambda == 0.0) continue;
    for (int dn : {-1, 1})
      for (int dm : {-1, 1}) {
        BasisState bra{ket.n + dn, ket.m_index + dm};
        if (!b.contains(bra)) continue;
        long c = local[b.index_of(bra)];
        trip.emplace_back(c, r, matrix_element(bra, ket, p));
      }
  }
  blk.matrix.resize(blk.members.size(), blk.members.size());
  blk.matrix.setFromTriplets(trip.begin(), trip.end());
  blk.matrix.makeCompressed();
  return blk;
}

Eigen::VectorXd apply_parity(const Basis& b, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != b.size()) throw std::invalid_argument("apply_parity: size mismatch");
  Eigen::VectorXd out = v;
  for (std::size_t k = 0; k < b.size(); ++k)
    if (parity_sign(b[k].n, b[k].m_index) < 0) out(k) = -out(k);
  return out;
}

}  // namespace dicke
