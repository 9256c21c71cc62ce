#include "wgd/inference.hpp"

#include "wgd/error.hpp"
#include "wgd/quadrature.hpp"
#include "zonal_sums.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wgd {

namespace {

using boost::math::lgamma;

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

MleResult mle_sigma(const SpdMatrix& x, double n, const ShapeGenerator& h) {
  const int m = x.dim();
  if (!(n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "degrees of freedom must exceed m - 1");
  const double target = n * m;
  auto f = [&](double z) { return 2.0 * z * h.g_prime(z) - target; };

  double lo = std::max(1e-8, h.support_lo());
  double hi = std::min(1e12, h.support_hi());
  // Open support ends are approached but not evaluated.
  if (lo == h.support_lo()) lo = lo > 0 ? lo * (1.0 + 1e-12) : 1e-8;
  if (hi == h.support_hi()) hi *= 1.0 - 1e-12;
  if (!(hi > lo)) fail(ErrorKind::NoRoot, "generator support does not meet the search interval");

  const int grid = 2000;
  std::vector<double> zs(grid + 1), fs(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    zs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / grid);
    fs[i] = f(zs[i]);
  }
  MleResult res;
  int total_iter = 0;
  for (int i = 0; i < grid; ++i) {
    if (fs[i] == 0.0) {
      res.roots.push_back(zs[i]);
      continue;
    }
    if (!std::isfinite(fs[i]) || !std::isfinite(fs[i + 1])) continue;
    if ((fs[i] < 0) == (fs[i + 1] < 0) || fs[i + 1] == 0.0) continue;
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, zs[i], zs[i + 1], fs[i], fs[i + 1],
                                               boost::math::tools::eps_tolerance<double>(52), it);
    total_iter += static_cast<int>(it);
    double z = 0.5 * (r.first + r.second);
    if (std::abs(f(r.first)) < std::abs(f(z))) z = r.first;
    if (std::abs(f(r.second)) < std::abs(f(z))) z = r.second;
    res.roots.push_back(z);
  }
  if (fs[grid] == 0.0) res.roots.push_back(zs[grid]);
  if (res.roots.empty()) {
    std::ostringstream os;
    os << "2 z g'(z) = " << target << " has no root in [" << lo << ", " << hi << "] for the " << h.name()
       << " generator";
    fail(ErrorKind::NoRoot, os.str());
  }
  // Profile log-likelihood at Sigma = (m/z) X, up to a constant.
  double best = -std::numeric_limits<double>::infinity();
  for (double z : res.roots) {
    const double ll = 0.5 * n * m * std::log(z) + h.log_h(z);
    if (ll > best) {
      best = ll;
      res.z = z;
    }
  }
  res.iterations = total_iter;
  const double scale = 2.0 / n * h.g_prime(res.z);
  res.sigma = SpdMatrix::from_entries(scale * x.matrix());
  const double zz = res.sigma.trace_inverse_times(x.matrix());
  res.residual = max_abs(res.sigma.matrix() - 2.0 / n * h.g_prime(zz) * x.matrix()) / max_abs(x.matrix());
  return res;
}

namespace {

// log int y^{s-1} exp(-c y / 2) h(y) dy
double tilted_log_mellin(const ShapeGenerator& h, double s, double c) {
  if (h.kind() == GeneratorKind::Exponential) return lgamma(s) + s * std::log(2.0 / (1.0 + c));
  if (c == 0.0) return h.log_mellin(s);
  auto lf = [&](double y) { return (s - 1.0) * std::log(y) - 0.5 * c * y + h.log_h(y); };
  return log_integrate_positive(lf, h.support_lo(), h.support_hi(), "tilted Mellin transform").log_value;
}

double log_pochhammer_m(double a, const Partition& kappa, int m) {
  return gamma_m_partition_ln(a, kappa, m) - mv_gamma_ln(a, m);
}

void check_prior(const PriorIW& prior, int m) {
  require_same_dim(prior.omega.dim(), m, "prior scale");
  if (!(prior.p > m - 1)) fail(ErrorKind::ParameterOutOfRange, "prior degrees of freedom must exceed m - 1");
}

}  // namespace

SeriesValue log_posterior_normalizer(const SpdMatrix& x, const ShapeGenerator& h, const SpdMatrix& omega, double b,
                                     const Truncation& trunc) {
  const int m = x.dim();
  require_same_dim(omega.dim(), m, "prior scale");
  if (!(b > 0.5 * (m - 1))) {
    std::ostringstream os;
    os << "posterior normalizer needs b > (m-1)/2, got b = " << b;
    fail(ErrorKind::DomainError, os.str());
  }
  const Vector ev = product_eigenvalues(omega.matrix(), x.inverse_spd());
  const double c = 0.5 * (ev(0) + ev(m - 1));
  const Vector d = (ev.array() - c).matrix();
  const double s = b * m;
  // Layers are taken relative to layer 0 so that extreme X cannot underflow.
  const double shift = tilted_log_mellin(h, s, c) - lgamma(s);
  auto layer = [&](int k) -> std::optional<std::complex<double>> {
    const double base =
        tilted_log_mellin(h, s + k, c) - lgamma(s + k) - lgamma(k + 1.0) - k * std::log(2.0) - shift;
    return (k % 2 ? -1.0 : 1.0) *
           detail::weighted_zonal_layer(k, detail::span_of(d), base,
                                        [&](const Partition& q) { return log_pochhammer_m(b, q, m); });
  };
  SeriesValue out = sum_series(layer, trunc, SeriesShape::Plain, "posterior normalizer");
  if (!(out.value.real() > 0.0)) fail(ErrorKind::NonpositiveDensity, "posterior normalizer series is not positive");
  out.value = mv_gamma_ln(b, m) - b * x.log_det() + shift + std::log(out.value.real());
  return out;
}

SeriesValue bayes_marginal_ln(const SpdMatrix& x, double n, const ShapeGenerator& h, const PriorIW& prior,
                              const Truncation& trunc, Formula f) {
  const int m = x.dim();
  check_prior(prior, m);
  if (!(n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "degrees of freedom must exceed m - 1");
  const double s0 = 0.5 * n * m;
  const double a = 0.5 * (n + prior.p);
  const double q = 0.5 * (m + 1);
  const double log_k = lgamma(s0) - mv_gamma_ln(0.5 * n, m) - h.log_mellin(s0);
  if (f == Formula::AsPrinted) {
    const Vector ev = product_eigenvalues(prior.omega.matrix(), x.inverse_spd());
    auto layer = [&](int k) -> std::optional<std::complex<double>> {
      const double base = mv_gamma_ln(a, m) + h.log_mellin(a * m + k) - lgamma(a * m + k) - k * std::log(2.0);
      return (k % 2 ? -1.0 : 1.0) *
             detail::weighted_zonal_layer(k, detail::span_of(ev), base,
                                          [&](const Partition& kp) { return log_pochhammer_m(a, kp, m); });
    };
    SeriesValue out = sum_series(layer, trunc, SeriesShape::Alternating, "marginal density (as printed)");
    if (!(out.value.real() > 0.0)) fail(ErrorKind::NonpositiveDensity, "printed marginal series is not positive");
    const double pref = log_k - 0.5 * prior.p * (prior.p - m - 1) * std::log(2.0) - mv_gamma_ln(0.5 * prior.p, m) +
                        0.5 * (prior.p - m - 1) * prior.omega.log_det() - (0.5 * prior.p + q) * x.log_det();
    out.value = pref + std::log(out.value.real());
    return out;
  }
  SeriesValue z = log_posterior_normalizer(x, h, prior.omega, a, trunc);
  const double log_c_iw =
      0.5 * prior.p * prior.omega.log_det() - 0.5 * prior.p * m * std::log(2.0) - mv_gamma_ln(0.5 * prior.p, m);
  z.value = log_k + (0.5 * n - q) * x.log_det() + log_c_iw + z.value.real();
  return z;
}

double posterior_logpdf(const SpdMatrix& sigma, const SpdMatrix& x, double n, const ShapeGenerator& h,
                        const PriorIW& prior, const Truncation& trunc) {
  const int m = x.dim();
  check_prior(prior, m);
  require_same_dim(sigma.dim(), m, "Sigma");
  if (!(n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "degrees of freedom must exceed m - 1");
  const double a = 0.5 * (n + prior.p);
  const double lh = h.log_h(sigma.trace_inverse_times(x.matrix()));
  if (!std::isfinite(lh)) return -std::numeric_limits<double>::infinity();
  const double log_z = log_posterior_normalizer(x, h, prior.omega, a, trunc).value.real();
  return -(a + 0.5 * (m + 1)) * sigma.log_det() - 0.5 * sigma.trace_inverse_times(prior.omega.matrix()) + lh - log_z;
}

double bayes_det_sigma(const SpdMatrix& x, double n, const ShapeGenerator& h, const PriorIW& prior,
                       const Truncation& trunc) {
  const int m = x.dim();
  check_prior(prior, m);
  if (!(n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "degrees of freedom must exceed m - 1");
  const double a = 0.5 * (n + prior.p);
  if (!(a - 1.0 > 0.5 * (m - 1))) {
    std::ostringstream os;
    os << "posterior mean of det(Sigma) needs (n+p)/2 - 1 > (m-1)/2, got " << a - 1.0;
    fail(ErrorKind::DomainError, os.str());
  }
  const double num = log_posterior_normalizer(x, h, prior.omega, a - 1.0, trunc).value.real();
  const double den = log_posterior_normalizer(x, h, prior.omega, a, trunc).value.real();
  return std::exp(num - den);
}

BetaProductReport beta_product_check(int m, double n, double p, long samples, std::uint64_t seed) {
  if (m < 1) fail(ErrorKind::InvalidInput, "dimension must be positive");
  if (!(p > m)) fail(ErrorKind::DomainError, "identity needs p > m");
  if (!(n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "n must exceed m - 1");
  if (std::floor(n) != n) fail(ErrorKind::InvalidInput, "the product runs over i = 0..n+1 and needs integer n");
  BetaProductReport r{};
  r.m = m;
  r.n = n;
  r.p = p;
  double log_lhs = 0.0;
  for (int i = 0; i <= static_cast<int>(n) + 1; ++i) {
    const double b = p + (i - 2) * 0.5 * m;
    if (!(b > 0)) fail(ErrorKind::DomainError, "beta argument is not positive");
    log_lhs += std::log(boost::math::beta(0.5 * m, b));
  }
  r.lhs_as_printed = std::exp(log_lhs);
  const double s0 = 0.5 * n * m;
  r.rhs = std::exp(mv_gamma_ln(0.5 * n, m) + lgamma(p) - lgamma(s0 + p));
  r.lhs_rhs_relative_gap = std::abs(r.lhs_as_printed - r.rhs) / r.rhs;
  if (m == 1) {
    auto q = integrate([&](double x) { return std::pow(x, 0.5 * n - 1.0) * std::pow(1.0 + x, -(s0 + p)); }, 0.0,
                       std::numeric_limits<double>::infinity(), 1e-13);
    r.integral = q.value;
    r.integral_std_error = q.error;
    r.samples = 0;
    r.integral_z = 0.0;
    return r;
  }
  // Proposal s W, W ~ W_m(I, n), s ~ InvGamma(p, 1): the weight
  // ((1 + t/2) / (1 + t))^{nm/2+p} (times a constant) is bounded.
  WishartScaleMixture prop(SpdMatrix::identity(m), n, p);
  auto draw = [&](RngStream& rng) {
    SpdMatrix x = prop.draw(rng);
    const double lf = (0.5 * n - 0.5 * (m + 1)) * x.log_det() - (s0 + p) * std::log1p(x.trace());
    return std::exp(lf - prop.logpdf(x));
  };
  McEstimate e = mc_generic(draw, samples, seed);
  r.integral = e.mean;
  r.integral_std_error = e.std_error;
  r.samples = samples;
  r.integral_z = e.std_error > 0 ? (e.mean - r.rhs) / e.std_error : 0.0;
  return r;
}

}  // namespace wgd
