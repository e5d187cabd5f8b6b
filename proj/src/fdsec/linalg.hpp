#pragma once

#include <Eigen/Dense>
#include <complex>

namespace fdsec {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Numerical-rank tolerance: eigenvalues above kRankTol * lambda_max count.
inline constexpr double kRankTol = 1e-6;

struct HermEig {
  RealVector values;      // descending
  ComplexMatrix vectors;  // column i pairs with values(i)
};

/// Conjugate symmetry within `tol` (scaled by max(1, max|entry|)) and a real
/// diagonal.
bool is_hermitian(const ComplexMatrix& h, double tol = 1e-12);

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
/// Throws InvalidArgument on non-Hermitian input and NotConverged if the
/// underlying iteration fails.
HermEig herm_eig(const ComplexMatrix& h);

/// (Q^H Q)^{-1} Q^H for a tall matrix with full column rank. Throws Singular
/// when the 2-norm condition number exceeds 1e12.
ComplexMatrix pseudoinverse_full_col_rank(const ComplexMatrix& q);

/// 2-norm condition number via singular values.
double condition_number(const ComplexMatrix& q);

/// True iff the smallest eigenvalue is >= -tol.
bool is_psd(const ComplexMatrix& h, double tol);

/// Hermitian A + iB  ->  [[A, -B], [B, A]].
RealMatrix embed_real(const ComplexMatrix& h);

/// Inverse of embed_real. Projects a symmetric 2N x 2N matrix onto the
/// embedded structure by averaging the mirrored blocks.
ComplexMatrix unembed_real(const RealMatrix& x);

/// Frobenius distance from the embedded structure, relative to ||x||_F.
double embedding_asymmetry(const RealMatrix& x);

/// Solves M x = b for symmetric positive definite M via Cholesky. Throws
/// Factorization if M is not numerically positive definite.
RealVector solve_spd(const RealMatrix& m, const RealVector& b);

/// Count of entries > tol * max(values); values need not be sorted.
int numerical_rank(const RealVector& values, double tol = kRankTol);

/// Returns (H + H^H) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& h);

/// Rank-one outer product v v^H.
inline ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

/// Real part of Tr(A B) for Hermitian operands.
inline double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace fdsec
