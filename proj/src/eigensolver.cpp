#include "dicke/eigensolver.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dicke/errors.hpp"

namespace dicke {

double matrix_scale(const SparseMatrix& h) {
  double s = 0.0;
  for (int r = 0; r < h.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(h, r); it; ++it) row += std::abs(it.value());
    s = std::max(s, row);
  }
  return s > 0.0 ? s : 1.0;
}

Eigenpair lowest_eigenpair_dense(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("dense eigensolve needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolve failed");
  Eigenpair out;
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0);
  out.residual = (h * out.vector - out.value * out.vector).norm();
  out.dense = true;
  return out;
}

Eigenpair lowest_eigenpair(const SparseMatrix& h, double tol, const LanczosOptions& opt) {
  if (!(tol > 0.0)) throw std::invalid_argument("lowest_eigenpair: tol must be > 0");
  const Eigen::Index n = h.rows();
  if (n != h.cols() || n == 0) throw std::invalid_argument("lowest_eigenpair: matrix must be square and nonempty");
  const double scale = matrix_scale(h);
  const double target = tol * scale;

  if (n == 1) {
    Eigenpair out;
    out.value = h.coeff(0, 0);
    out.vector = Eigen::VectorXd::Ones(1);
    return out;
  }

  // Deterministic start vector.
  std::mt19937_64 rng(0x5eed1234ULL);
  std::uniform_real_distribution<double> uni(0.5, 1.5);
  Eigen::VectorXd v0(n);
  for (Eigen::Index i = 0; i < n; ++i) v0(i) = uni(rng);
  v0.normalize();

  const int m = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, n));
  Eigen::MatrixXd V(n, m + 1);
  Eigen::VectorXd alpha(m), beta(m);
  Eigenpair best;
  best.residual = INFINITY;
  int matvecs = 0;
  std::ostringstream trace;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    V.col(0) = v0;
    int k_used = 0;
    double theta = 0.0;
    Eigen::VectorXd s;
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd w = h * V.col(k);
      ++matvecs;
      alpha(k) = V.col(k).dot(w);
      // Full reorthogonalization, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd c = V.leftCols(k + 1).transpose() * w;
        w.noalias() -= V.leftCols(k + 1) * c;
      }
      beta(k) = w.norm();
      k_used = k + 1;
      bool last = (k + 1 == m) || beta(k) <= 1e-14 * scale;
      if (last || k % 5 == 4) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(alpha.head(k_used), beta.head(k_used - 1), Eigen::ComputeEigenvectors);
        theta = tri.eigenvalues()(0);
        s = tri.eigenvectors().col(0);
        double est = std::abs(beta(k) * s(k_used - 1));
        if (est <= 0.1 * target) last = true;
      }
      if (last) break;
      V.col(k + 1) = w / beta(k);
    }
    Eigen::VectorXd y = V.leftCols(k_used) * s;
    y.normalize();
    Eigen::VectorXd r = h * y - theta * y;
    ++matvecs;
    double res = r.norm();
    trace << " restart " << restart << ": E=" << theta << " res=" << res << ";";
    if (res < best.residual) {
      best.value = theta;
      best.vector = y;
      best.residual = res;
    }
    if (res <= target) {
      best.iterations = matvecs;
      return best;
    }
    v0 = y;
  }

  if (static_cast<std::size_t>(n) <= opt.dense_fallback_max) {
    Eigenpair d = lowest_eigenpair_dense(Eigen::MatrixXd(h));
    d.iterations = matvecs;
    if (d.residual <= std::max(target, 1e-12 * scale)) return d;
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge after " << matvecs << " matvecs (dim " << n << ", target " << target
      << ");" << trace.str();
  throw NumericalError(msg.str());
}

}  // namespace dicke
