#include "wgd/matrix_core.hpp"

#include "wgd/error.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>

namespace wgd {

Vector sym_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

void require_same_dim(int a, int b, const std::string& what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension " << a << " vs " << b;
    fail(ErrorKind::DimensionMismatch, os.str());
  }
}

namespace {

void check_square(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    fail(ErrorKind::DimensionMismatch, "matrix must be square and non-empty");
  if (!a.allFinite()) fail(ErrorKind::DomainError, "matrix has non-finite entries");
}

Matrix checked_symmetric_part(const Matrix& a, double tol) {
  check_square(a);
  double scale = a.cwiseAbs().maxCoeff();
  if (tol < 0) tol = 1e-10 * scale;
  double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream os;
    os << "max |a_ij - a_ji| = " << asym << " exceeds " << tol;
    fail(ErrorKind::NotSymmetric, os.str());
  }
  return 0.5 * (a + a.transpose());
}

}  // namespace

SymMatrix SymMatrix::from_entries(const Matrix& a, double symmetry_tol) {
  return SymMatrix(checked_symmetric_part(a, symmetry_tol));
}

SymMatrix SymMatrix::identity(int m) { return SymMatrix(Matrix::Identity(m, m)); }
SymMatrix SymMatrix::zero(int m) { return SymMatrix(Matrix::Zero(m, m)); }

SpdMatrix SpdMatrix::from_entries(const Matrix& a, MatrixTolerance tol) {
  SpdMatrix s;
  s.a_ = checked_symmetric_part(a, tol.symmetry);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.a_);
  double lmax = es.eigenvalues().maxCoeff();
  double lmin = es.eigenvalues().minCoeff();
  double ptol = tol.positivity < 0 ? 1e-12 * std::max(lmax, 0.0) : tol.positivity;
  if (!(lmin > ptol) || !(lmax > 0)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lmin << " is not above " << ptol;
    fail(ErrorKind::NotPositiveDefinite, os.str());
  }
  s.eigenvalues_ = es.eigenvalues().reverse();
  s.eigenvectors_ = es.eigenvectors().rowwise().reverse();
  s.factor();
  return s;
}

void SpdMatrix::factor() {
  Eigen::LLT<Matrix> llt(a_);
  if (llt.info() != Eigen::Success) fail(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  chol_ = llt.matrixL();
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

SpdMatrix SpdMatrix::identity(int m) { return scalar(m, 1.0); }

SpdMatrix SpdMatrix::scalar(int m, double c) {
  if (!(c > 0)) fail(ErrorKind::NotPositiveDefinite, "scalar matrix needs c > 0");
  return from_entries(c * Matrix::Identity(m, m));
}

Matrix SpdMatrix::inverse() const {
  Matrix inv = Eigen::LLT<Matrix>(a_).solve(Matrix::Identity(dim(), dim()));
  return 0.5 * (inv + inv.transpose());
}

SpdMatrix SpdMatrix::inverse_spd() const { return from_entries(inverse(), {0.0, 0.0}); }

SpdMatrix SpdMatrix::scaled(double c) const {
  if (!(c > 0)) fail(ErrorKind::NotPositiveDefinite, "scale factor must be positive");
  return from_entries(c * a_, {0.0, 0.0});
}

SpdMatrix SpdMatrix::congruence(const Matrix& a) const {
  require_same_dim(static_cast<int>(a.cols()), dim(), "congruence");
  Matrix b = a * a_ * a.transpose();
  return from_entries(0.5 * (b + b.transpose()));
}

double SpdMatrix::trace_inverse_times(const Matrix& b) const {
  require_same_dim(static_cast<int>(b.rows()), dim(), "trace_inverse_times");
  return Eigen::LLT<Matrix>(a_).solve(b).trace();
}

SpdMatrix spd_from_entries(const Matrix& a, MatrixTolerance tol) { return SpdMatrix::from_entries(a, tol); }

Matrix sqrt_spd_matrix(const SpdMatrix& s) {
  const Matrix& v = s.eigenvectors();
  Matrix r = v * s.eigenvalues().cwiseSqrt().asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

Matrix inv_sqrt_spd_matrix(const SpdMatrix& s) {
  const Matrix& v = s.eigenvectors();
  Matrix r = v * s.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

SpdMatrix sqrt_spd(const SpdMatrix& s) { return SpdMatrix::from_entries(sqrt_spd_matrix(s), {0.0, 0.0}); }

Vector product_eigenvalues(const Matrix& a, const SpdMatrix& b) {
  require_same_dim(static_cast<int>(a.rows()), b.dim(), "product_eigenvalues");
  Matrix r = sqrt_spd_matrix(b);
  Matrix c = r * a * r;
  return sym_eigenvalues(0.5 * (c + c.transpose()));
}

double mv_gamma_ln(double a, int m) {
  if (m < 1) fail(ErrorKind::DimensionMismatch, "mv_gamma_ln needs m >= 1");
  if (!(a > 0.5 * (m - 1))) {
    std::ostringstream os;
    os << "multivariate gamma needs a > (m-1)/2, got a = " << a << ", m = " << m;
    fail(ErrorKind::DomainError, os.str());
  }
  double r = 0.25 * m * (m - 1) * std::log(boost::math::constants::pi<double>());
  for (int i = 0; i < m; ++i) r += boost::math::lgamma(a - 0.5 * i);
  return r;
}

double mv_beta_ln(double a, double b, int m) { return mv_gamma_ln(a, m) + mv_gamma_ln(b, m) - mv_gamma_ln(a + b, m); }

}  // namespace wgd
