#include "secbeam/linalg.hpp"

#include <cmath>
#include <string>

#include "secbeam/errors.hpp"

namespace secbeam {

using Eigen::MatrixXcd;

MatrixXcd hermitize(const MatrixXcd& A) { return 0.5 * (A + A.adjoint()); }

void check_finite(const MatrixXcd& A, const char* what) {
  if (!A.allFinite())
    throw NonFiniteInput(std::string(what) + ": non-finite entries");
}

double logdet_id_plus_gram(const MatrixXcd& A, const MatrixXcd& S) {
  if (S.rows() != S.cols() || S.rows() != A.rows())
    throw DimensionMismatch("logdet_id_plus_gram: incompatible shapes");
  Eigen::LLT<MatrixXcd> llt(hermitize(S));
  if (llt.info() != Eigen::Success)
    throw NonPSD("logdet_id_plus_gram: S is not positive definite");
  if (A.cols() == 0) return 0.0;
  // ln det(I_m + A A^H S^-1) = ln det(I_k + B^H B) with B = L^-1 A.
  const MatrixXcd B = llt.matrixL().solve(A);
  const MatrixXcd G =
      MatrixXcd::Identity(A.cols(), A.cols()) + B.adjoint() * B;
  Eigen::LLT<MatrixXcd> lltg(hermitize(G));
  if (lltg.info() != Eigen::Success)
    throw NonPSD("logdet_id_plus_gram: Gram factorization failed");
  double acc = 0.0;
  const MatrixXcd L = lltg.matrixL();
  for (int i = 0; i < L.rows(); ++i) acc += std::log(L(i, i).real());
  return 2.0 * acc;
}

double logdet_id_plus_scaled(const MatrixXcd& Q, double sigma2) {
  if (Q.rows() != Q.cols())
    throw DimensionMismatch("logdet_id_plus_scaled: square matrix required");
  const MatrixXcd G =
      MatrixXcd::Identity(Q.rows(), Q.cols()) + hermitize(Q) / sigma2;
  Eigen::LLT<MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success)
    throw NonPSD("logdet_id_plus_scaled: I + Q/sigma2 not positive definite");
  double acc = 0.0;
  const MatrixXcd L = llt.matrixL();
  for (int i = 0; i < L.rows(); ++i) acc += std::log(L(i, i).real());
  return 2.0 * acc;
}

MatrixXcd hpd_inverse(const MatrixXcd& S) {
  Eigen::LLT<MatrixXcd> llt(hermitize(S));
  if (llt.info() != Eigen::Success)
    throw NonPSD("hpd_inverse: matrix is not positive definite");
  return llt.solve(MatrixXcd::Identity(S.rows(), S.cols()));
}

MatrixXcd psd_factor(const MatrixXcd& B, double rel_tol) {
  if (B.rows() != B.cols())
    throw DimensionMismatch("psd_factor: square matrix required");
  check_finite(B, "psd_factor");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitize(B));
  if (es.info() != Eigen::Success)
    throw NumericalFailure("psd_factor: eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 0.0);
  if (lam.minCoeff() < -rel_tol * std::max(scale, 1e-300))
    throw NonPSD("psd_factor: matrix has a significant negative eigenvalue");
  // Keep only numerically meaningful directions.
  const double keep_tol = scale * 1e-14;
  int kept = 0;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > keep_tol) ++kept;
  MatrixXcd F(kept, B.cols());
  int row = 0;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) > keep_tol)
      F.row(row++) = std::sqrt(lam(i)) * es.eigenvectors().col(i).adjoint();
  }
  return F;
}

}  // namespace secbeam
