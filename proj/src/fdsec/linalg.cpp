#include "fdsec/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <sstream>

#include "fdsec/error.hpp"

namespace fdsec {

bool is_hermitian(const ComplexMatrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  if (!h.allFinite()) return false;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double limit = tol * scale;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (std::abs(h(i, i).imag()) > limit) return false;
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) {
      if (std::abs(h(i, j) - std::conj(h(j, i))) > limit) return false;
    }
  }
  return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  return 0.5 * (h + h.adjoint());
}

HermEig herm_eig(const ComplexMatrix& h) {
  if (!is_hermitian(h)) fail(ErrorCode::InvalidArgument, "herm_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::NotConverged, "herm_eig: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  HermEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double condition_number(const ComplexMatrix& q) {
  Eigen::JacobiSVD<ComplexMatrix> svd(q);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smallest = s(s.size() - 1);
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

ComplexMatrix pseudoinverse_full_col_rank(const ComplexMatrix& q) {
  if (q.rows() < q.cols()) {
    fail(ErrorCode::Singular, "pseudoinverse: more columns than rows");
  }
  if (!q.allFinite()) fail(ErrorCode::InvalidArgument, "pseudoinverse: non-finite entries");
  if (q.cols() == 0) return ComplexMatrix(0, q.rows());
  // The SVD route is algebraically (Q^H Q)^{-1} Q^H but does not square the
  // condition number.
  Eigen::JacobiSVD<ComplexMatrix> svd(q, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest <= 0.0 || s(0) / smallest > 1e12) {
    std::ostringstream msg;
    msg << "pseudoinverse: rank-deficient input (condition estimate "
        << (smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity()) << ")";
    fail(ErrorCode::Singular, msg.str());
  }
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

bool is_psd(const ComplexMatrix& h, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return false;
  return h.rows() == 0 || solver.eigenvalues()(0) >= -tol;
}

RealMatrix embed_real(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  const RealMatrix re = h.real();
  const RealMatrix im = h.imag();
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

ComplexMatrix unembed_real(const RealMatrix& x) {
  const Eigen::Index n = x.rows() / 2;
  const RealMatrix re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = 0.5 * (re + re.transpose());
  out.imag() = 0.5 * (im - im.transpose());
  return out;
}

double embedding_asymmetry(const RealMatrix& x) {
  const double norm = x.norm();
  if (norm == 0.0) return 0.0;
  return (x - embed_real(unembed_real(x))).norm() / norm;
}

RealVector solve_spd(const RealMatrix& m, const RealVector& b) {
  Eigen::LLT<RealMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::Factorization, "solve_spd: matrix is not positive definite");
  }
  return llt.solve(b);
}

int numerical_rank(const RealVector& values, double tol) {
  if (values.size() == 0) return 0;
  const double top = values.maxCoeff();
  if (top <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > tol * top) ++rank;
  }
  return rank;
}

}  // namespace fdsec
