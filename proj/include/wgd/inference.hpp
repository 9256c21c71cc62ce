#pragma once

#include "wgd/distributions.hpp"
#include "wgd/generators.hpp"
#include "wgd/matrix_core.hpp"
#include "wgd/sampling.hpp"
#include "wgd/series.hpp"

#include <cstdint>
#include <vector>

namespace wgd {

struct MleResult {
  SpdMatrix sigma;
  // z = tr(sigma^{-1} X), the root of 2 z g'(z) = n m.
  double z = 0.0;
  int iterations = 0;
  // max |sigma - (2/n) g'(tr(sigma^{-1} X)) X| / max |X|
  double residual = 0.0;
  // Every root found; z is the one with the largest profile likelihood.
  std::vector<double> roots;
};

// Single-observation MLE of Sigma. Sigma-hat is proportional to X, so the
// fixed point reduces to the scalar equation 2 z g'(z) = n m, searched on
// z in [1e-8, 1e12] (clipped to the support of h). NoRoot when it has no
// solution there.
MleResult mle_sigma(const SpdMatrix& x, double n, const ShapeGenerator& h);

// Sigma ~ IW(Omega, p): density |Omega|^{p/2} / (2^{pm/2} Gamma_m(p/2))
// |Sigma|^{-(p+m+1)/2} etr(-Omega Sigma^{-1} / 2).
struct PriorIW {
  SpdMatrix omega;
  double p;
};

// log Z_b with Z_b = int |T|^{b-(m+1)/2} etr(-T Omega / 2) h(tr T X) dT over
// T > 0. Summed as a zonal series in the eigenvalues of (Omega - c X) X^{-1}
// with the generator tilted by exp(-c y / 2), c the midpoint of the spectrum
// of Omega X^{-1}; the series then converges for every Omega and X.
SeriesValue log_posterior_normalizer(const SpdMatrix& x, const ShapeGenerator& h, const SpdMatrix& omega, double b,
                                     const Truncation& trunc);

// log m(X) for X | Sigma ~ WGD(Sigma, n, h) and Sigma ~ IW(Omega, p).
// AsPrinted evaluates the literal series (constant 2^{p(p-m-1)/2} Gamma_m(p/2),
// det(Omega)^{(p-m-1)/2}, no 1/k!).
SeriesValue bayes_marginal_ln(const SpdMatrix& x, double n, const ShapeGenerator& h, const PriorIW& prior,
                              const Truncation& trunc, Formula f = Formula::Corrected);

double posterior_logpdf(const SpdMatrix& sigma, const SpdMatrix& x, double n, const ShapeGenerator& h,
                        const PriorIW& prior, const Truncation& trunc);

// E[det Sigma | X] = Z_{(n+p)/2-1} / Z_{(n+p)/2}.
double bayes_det_sigma(const SpdMatrix& x, double n, const ShapeGenerator& h, const PriorIW& prior,
                       const Truncation& trunc);

struct BetaProductReport {
  int m;
  double n;
  double p;
  double lhs_as_printed;
  double rhs;
  // int |X|^{(n-m-1)/2} (1 + tr X)^{-(nm/2+p)} dX: quadrature at m = 1,
  // importance sampling otherwise.
  double integral;
  double integral_std_error;
  long samples;
  double lhs_rhs_relative_gap;
  double integral_z;
};
BetaProductReport beta_product_check(int m, double n, double p, long samples = 200000, std::uint64_t seed = 11);

}  // namespace wgd
