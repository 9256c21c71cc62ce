#pragma once

#include "wgd/distributions.hpp"
#include "wgd/partitions_zonal.hpp"
#include "wgd/series.hpp"

#include <complex>

namespace wgd {

// E[det(X)^r] and its logarithm. Needs r + n/2 > (m-1)/2.
double det_moment(const WgdParams& p, double r);
double log_det_expectation(const WgdParams& p, double r);

// E[C_kappa(X)] = Gamma(nm/2) (n/2)_kappa gamma_k / (gamma_0 Gamma(nm/2+k)) C_kappa(Sigma).
// AsPrinted drops (n/2)_kappa gamma_k / Gamma(nm/2+k) and divides by Gamma_m(n/2).
double zonal_expectation(const WgdParams& p, const Partition& kappa, Formula f = Formula::Corrected);

// E[(tr X)^r]. The corrected form is exact: the radial moment
// gamma_0(n/2 + r/m)/gamma_0(n/2) times E[(tr Sigma U)^r] for the
// generator-free direction U, summed as a binomial series around
// lambda_max(Sigma) (finite for integer r). AsPrinted sums the literal
// k-series with Gamma(nm/2+k+r)/Gamma(nm/2+k) weights.
SeriesValue trace_moment(const WgdParams& p, double r, const Truncation& trunc, Formula f = Formula::Corrected);

// E[etr(i T X)] as a zonal series in the eigenvalues of T Sigma.
SeriesValue cf_series(const WgdParams& p, const SymMatrix& t, const Truncation& trunc);
// det(I - 2i T Sigma)^{-n/2}, principal branch.
std::complex<double> wishart_cf_closed(const SpdMatrix& sigma, double n, const SymMatrix& t);

// E[etr(-s X)] = Gamma(nm/2) |Sigma|^{-n/2} / gamma_0 sum_k h^(k)(0)/k! s^{-(nm/2+k)}
//                sum_kappa (n/2)_kappa C_kappa(Sigma^{-1}).
// AsPrinted omits h^(k)(0)/k!.
SeriesValue laplace_series(const WgdParams& p, double s, const Truncation& trunc, Formula f = Formula::Corrected);

// log joint density of the eigenvalues (descending, distinct, positive).
SeriesValue eig_joint_logpdf(const WgdParams& p, const Vector& lambda, const Truncation& trunc);
// Same density with the orthogonal average collapsed to h(tr Lambda);
// exact only when Sigma is a multiple of the identity.
double eig_joint_logpdf_isotropic(const WgdParams& p, const Vector& lambda);

// P(X < A). The corrected series carries det(Sigma^{-1} A)^{n/2} and
// Gamma_m((m+1)/2) without a partition shift; AsPrinted follows the literal
// statement.
SeriesValue prob_less_than(const WgdParams& p, const SpdMatrix& a, const Truncation& trunc,
                           Formula f = Formula::Corrected);
SeriesValue lmax_cdf(const WgdParams& p, double a, const Truncation& trunc, Formula f = Formula::Corrected);

// Density of y = tr X. The corrected series carries h^(k)(0)/k!; AsPrinted
// is the literal form with the exp(-y) factor.
SeriesValue trace_pdf(const WgdParams& p, double y, const Truncation& trunc, Formula f = Formula::Corrected);
// y^{nm/2-1} h(y / sigma2) / (sigma2^{nm/2} gamma_0) for Sigma = sigma2 I.
double trace_pdf_exact_iso(double sigma2, double n, int m, const ShapeGenerator& h, double y);

// X ~ WGD(alpha Sigma, n, h) independent of Y ~ W_m(beta Sigma, p).
struct RatioModel {
  ShapeGenerator h;
  double n;
  double alpha;
  double beta;
  double p;
};
// Density of B1 = X^{-1/2} Y X^{-1/2}.
SeriesValue ratio_b1_pdf(const RatioModel& model, const SpdMatrix& b1, const Truncation& trunc);
// Density of B2 = (X+Y)^{-1/2} X (X+Y)^{-1/2}, 0 < B2 < I. The corrected
// form has det(B2)^{-p/2-(m+1)/2}; AsPrinted uses det(B2)^{-n/2-(m+1)/2}.
SeriesValue ratio_b2_pdf(const RatioModel& model, const SpdMatrix& b2, const Truncation& trunc,
                         Formula f = Formula::Corrected);

}  // namespace wgd
