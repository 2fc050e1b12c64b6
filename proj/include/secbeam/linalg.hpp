#pragma once

#include <Eigen/Dense>

namespace secbeam {

// (A + A^H) / 2: removes the numerical skew part before factorizations.
Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& A);

// ln det(I + A A^H S^{-1}) for Hermitian positive definite S, evaluated
// without forming an inverse or a raw determinant: Cholesky-whiten A, reduce
// to the (usually much smaller) Gram side, and sum log Cholesky diagonals.
// Throws NonPSD if S is not positive definite.
double logdet_id_plus_gram(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& S);

// ln det(I + Q / sigma2) for Hermitian PSD Q.
double logdet_id_plus_scaled(const Eigen::MatrixXcd& Q, double sigma2);

// Inverse of a Hermitian positive definite matrix via Cholesky.
Eigen::MatrixXcd hpd_inverse(const Eigen::MatrixXcd& S);

// Factor F with F^H F = B for Hermitian PSD B (eigenvalue square root with
// negligible-row pruning).  Eigenvalues below -rel_tol * max(|eig|) trigger
// NonPSD; small negatives inside the tolerance are clamped to zero.  The
// returned F may have fewer rows than B (rank deficiency) including zero.
Eigen::MatrixXcd psd_factor(const Eigen::MatrixXcd& B, double rel_tol = 1e-10);

// Throws NonFiniteInput when the matrix contains NaN or infinity.
void check_finite(const Eigen::MatrixXcd& A, const char* what);

}  // namespace secbeam
