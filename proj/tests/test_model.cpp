#include <doctest.h>

#include "dicke/eigensolver.hpp"
#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "oracles.hpp"

using namespace dicke;

TEST_CASE("basis ordering and lookup") {
  auto p = DickeParams::make(1, 1, 0.5, 4, 3);
  Basis b(p);
  CHECK(b.size() == 20);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(b.index_of(b[i]) == i);
    CHECK(i == static_cast<std::size_t>(b[i].n * 5 + b[i].m_index));
  }
  CHECK_THROWS_AS(b.index_of({4, 0}), std::out_of_range);
  CHECK_FALSE(b.contains({0, 5}));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DickeParams::make(0, 1, 0, 2, 1), ConfigError);
  CHECK_THROWS_AS(DickeParams::make(1, 1, -0.1, 2, 1), ConfigError);
  CHECK_THROWS_AS(DickeParams::make(1, 1, 0, 0, 1), ConfigError);
  CHECK_THROWS_AS(DickeParams::make(1, 1, 0, 2, -1), ConfigError);
  CHECK(critical_coupling(DickeParams::make(1, 1, 0, 2, 1)) == 0.5);
}

TEST_CASE("sparse hamiltonian equals the operator-product oracle") {
  for (auto p : {DickeParams::make(1, 1, 0.7, 4, 6), DickeParams::make(1.3, 0.8, 0.45, 3, 5),
                 DickeParams::make(1, 1, 0.0, 1, 0)}) {
    Eigen::MatrixXd h = Eigen::MatrixXd(assemble_hamiltonian(p));
    Eigen::MatrixXd ref = oracle::dicke_dense(p);
    CHECK((h - ref).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("hamiltonian never couples opposite parities") {
  auto p = DickeParams::make(1, 1, 1.3, 6, 10);
  SparseMatrix h = assemble_hamiltonian(p);
  Basis b(p);
  for (int k = 0; k < h.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
      const auto& r = b[it.row()];
      const auto& c = b[it.col()];
      CHECK(parity_sign(r.n, r.m_index) == parity_sign(c.n, c.m_index));
    }
  // Block restriction keeps exactly one parity class.
  auto even = assemble_parity_block(p, 1);
  auto odd = assemble_parity_block(p, -1);
  CHECK(even.members.size() + odd.members.size() == b.size());
  for (auto m : even.members) CHECK(parity_sign(b[m].n, b[m].m_index) == 1);
  // Parity operator commutes with H exactly.
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(b.size(), -1.0, 2.0);
  Eigen::VectorXd lhs = apply_parity(b, h * v), rhs = h * apply_parity(b, v);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dimension cap") {
  auto p = DickeParams::make(1, 1, 1.0, 10, 100);
  CHECK_THROWS_AS(assemble_hamiltonian(p, 100), std::length_error);
}

TEST_CASE("matrix elements at the sector edges") {
  auto p = DickeParams::make(1, 1, 1.0, 2, 2);
  // <1, m_index=1| H |0, m_index=0> = lambda/sqrt(2j) * 1 * sqrt(2)
  CHECK(matrix_element({1, 1}, {0, 0}, p) == doctest::Approx(1.0));
  CHECK(matrix_element({0, 0}, {0, 0}, p) == doctest::Approx(-1.0));
  CHECK(matrix_element({1, 0}, {0, 0}, p) == 0.0);
  CHECK_THROWS_AS(matrix_element({3, 0}, {0, 0}, p), std::out_of_range);
}
