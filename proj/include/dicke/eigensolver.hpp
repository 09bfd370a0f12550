#pragma once

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke {

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;   // total matrix-vector products
  double residual = 0.0;  // ||Hv - Ev||_2
  bool dense = false;     // produced by the dense fallback
};

struct LanczosOptions {
  int krylov_dim = 120;
  int max_restarts = 60;
  std::size_t dense_fallback_max = 2000;
};

// Scale used for the residual criterion: the infinity norm of H.
double matrix_scale(const SparseMatrix& h);

// Lowest eigenpair of a symmetric sparse matrix. Lanczos with full
// reorthogonalization, restarted from the current Ritz vector. Falls back to a
// dense solve for small matrices if Lanczos stalls. Accepts when
// ||Hv - Ev|| <= tol * matrix_scale(H).
Eigenpair lowest_eigenpair(const SparseMatrix& h, double tol, const LanczosOptions& opt = {});

// Dense symmetric reference path (Householder tridiagonalization + implicit QL).
Eigenpair lowest_eigenpair_dense(const Eigen::MatrixXd& h);

}  // namespace dicke
