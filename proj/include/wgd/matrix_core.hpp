#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace wgd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Negative tolerances select the defaults: 1e-10 * max|entry| for symmetry
// and 1e-12 * lambda_max for positivity.
struct MatrixTolerance {
  double symmetry = -1.0;
  double positivity = -1.0;
};

// Eigenvalues of a symmetric matrix in descending order.
Vector sym_eigenvalues(const Matrix& a);

class SymMatrix {
 public:
  SymMatrix() = default;

  // Throws NotSymmetric when |a_ij - a_ji| exceeds the tolerance; the stored
  // matrix is the symmetric part.
  static SymMatrix from_entries(const Matrix& a, double symmetry_tol = -1.0);
  static SymMatrix identity(int m);
  static SymMatrix zero(int m);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Matrix& matrix() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }
  double trace() const { return a_.trace(); }
  Vector eigenvalues() const { return sym_eigenvalues(a_); }
  bool is_zero() const { return a_.cwiseAbs().maxCoeff() == 0.0; }

 private:
  explicit SymMatrix(Matrix a) : a_(std::move(a)) {}
  Matrix a_;
};

class SpdMatrix {
 public:
  SpdMatrix() = default;

  static SpdMatrix from_entries(const Matrix& a, MatrixTolerance tol = {});
  static SpdMatrix identity(int m);
  static SpdMatrix scalar(int m, double c);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Matrix& matrix() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }
  SymMatrix sym() const { return SymMatrix::from_entries(a_, 0.0); }
  double trace() const { return a_.trace(); }

  // Descending.
  const Vector& eigenvalues() const { return eigenvalues_; }
  // Columns match eigenvalues().
  const Matrix& eigenvectors() const { return eigenvectors_; }
  const Matrix& cholesky_lower() const { return chol_; }
  double log_det() const { return log_det_; }
  double lambda_max() const { return eigenvalues_(0); }
  double lambda_min() const { return eigenvalues_(eigenvalues_.size() - 1); }

  Matrix inverse() const;
  SpdMatrix inverse_spd() const;
  SpdMatrix scaled(double c) const;
  // Returns A M A' which stays positive definite for nonsingular A.
  SpdMatrix congruence(const Matrix& a) const;
  // tr(this^{-1} b)
  double trace_inverse_times(const Matrix& b) const;

 private:
  void factor();
  Matrix a_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
  Matrix chol_;
  double log_det_ = 0.0;
};

SpdMatrix spd_from_entries(const Matrix& a, MatrixTolerance tol = {});
SpdMatrix sqrt_spd(const SpdMatrix& s);
Matrix sqrt_spd_matrix(const SpdMatrix& s);
Matrix inv_sqrt_spd_matrix(const SpdMatrix& s);

// Eigenvalues of A B for symmetric A and SPD B, computed as those of
// B^{1/2} A B^{1/2}. Descending.
Vector product_eigenvalues(const Matrix& a, const SpdMatrix& b);

// log Gamma_m(a) = (m(m-1)/4) log(pi) + sum_{i=1}^m log Gamma(a - (i-1)/2).
// DomainError when a <= (m-1)/2.
double mv_gamma_ln(double a, int m);
double mv_beta_ln(double a, double b, int m);

void require_same_dim(int a, int b, const std::string& what);

}  // namespace wgd
