#include "wgd/moments.hpp"

#include "wgd/error.hpp"
#include "zonal_sums.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace wgd {

namespace {

using boost::math::lgamma;
using cd = std::complex<double>;

double log_pochhammer_m(double a, const Partition& kappa, int m) {
  return gamma_m_partition_ln(a, kappa, m) - mv_gamma_ln(a, m);
}

void require_taylor(const ShapeGenerator& h) {
  if (!h.has_taylor()) fail(ErrorKind::NoTaylorExpansion, h.name() + " generator has no Taylor expansion at 0");
}

// h^(k)(0)/k! as (log magnitude, sign); nullopt for a vanishing coefficient.
std::optional<std::pair<double, double>> taylor_term(const ShapeGenerator& h, int k) {
  auto r = h.taylor_ratio(k);
  if (!r || *r == 0.0) return std::nullopt;
  return std::make_pair(std::log(std::abs(*r)), *r < 0 ? -1.0 : 1.0);
}

SeriesValue scaled(SeriesValue v, double log_factor) {
  v.value *= std::exp(log_factor);
  return v;
}

}  // namespace

SeriesValue cf_series(const WgdParams& p, const SymMatrix& t, const Truncation& trunc) {
  const int m = p.dim();
  require_same_dim(t.dim(), m, "cf_series: T");
  if (t.is_zero()) {
    SeriesValue one;
    one.value = 1.0;
    one.terms_used = 1;
    one.converged = true;
    return one;
  }
  const double s = p.nm_half();
  const double half_n = 0.5 * p.n();
  const Vector ev = product_eigenvalues(t.matrix(), p.sigma());
  auto layer = [&](int k) -> std::optional<cd> {
    double mk;
    try {
      mk = p.h().log_mellin(s + k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DivergentIntegral) throw;
      std::ostringstream os;
      os << "characteristic function series needs the moment of order " << k << " of h: " << e.what();
      fail(ErrorKind::DivergenceSuspected, os.str());
    }
    const double base = mk - p.log_gamma0() + lgamma(s) - lgamma(s + k) - lgamma(k + 1.0);
    static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ipow[k % 4] * detail::weighted_zonal_layer(k, detail::span_of(ev), base, [&](const Partition& q) {
             return log_pochhammer_m(half_n, q, m);
           });
  };
  return sum_series(layer, trunc, SeriesShape::Plain, "characteristic function");
}

std::complex<double> wishart_cf_closed(const SpdMatrix& sigma, double n, const SymMatrix& t) {
  require_same_dim(t.dim(), sigma.dim(), "wishart_cf_closed: T");
  const Vector ev = product_eigenvalues(t.matrix(), sigma);
  cd log_det = 0.0;
  for (int j = 0; j < ev.size(); ++j) log_det += std::log(cd(1.0, -2.0 * ev(j)));
  return std::exp(-0.5 * n * log_det);
}

SeriesValue laplace_series(const WgdParams& p, double s_arg, const Truncation& trunc, Formula f) {
  if (!(s_arg > 0.0)) fail(ErrorKind::DomainError, "Laplace transform needs s > 0");
  const int m = p.dim();
  const double s = p.nm_half();
  const double half_n = 0.5 * p.n();
  const Vector inv = p.sigma().inverse_spd().eigenvalues();
  const double pref = lgamma(s) - half_n * p.sigma().log_det() - p.log_gamma0() - s * std::log(s_arg);
  auto weight = [&](const Partition& q) { return log_pochhammer_m(half_n, q, m); };
  if (f == Formula::AsPrinted) {
    auto layer = [&](int k) -> std::optional<cd> {
      return detail::weighted_zonal_layer(k, detail::span_of(inv), -k * std::log(s_arg) - lgamma(k + 1.0), weight);
    };
    return scaled(sum_series(layer, trunc, SeriesShape::Plain, "Laplace transform (as printed)"), pref);
  }
  require_taylor(p.h());
  auto layer = [&](int k) -> std::optional<cd> {
    auto tt = taylor_term(p.h(), k);
    if (!tt) return std::nullopt;
    return tt->second *
           detail::weighted_zonal_layer(k, detail::span_of(inv), tt->first - k * std::log(s_arg), weight);
  };
  return scaled(sum_series(layer, trunc, SeriesShape::Plain, "Laplace transform"), pref);
}

namespace {

// Validates a descending spectrum; returns false when two values coincide.
bool check_spectrum(const Vector& lambda, int m) {
  require_same_dim(static_cast<int>(lambda.size()), m, "eigenvalues");
  for (int i = 0; i < m; ++i)
    if (!(lambda(i) > 0.0)) fail(ErrorKind::DomainError, "eigenvalues must be positive");
  bool distinct = true;
  for (int i = 0; i + 1 < m; ++i) {
    if (lambda(i) < lambda(i + 1)) fail(ErrorKind::DomainError, "eigenvalues must be in descending order");
    if (lambda(i) == lambda(i + 1)) distinct = false;
  }
  return distinct;
}

double eig_prefactor(const WgdParams& p, const Vector& lambda) {
  const int m = p.dim();
  const double half_n = 0.5 * p.n();
  double log_vdm = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) log_vdm += std::log(lambda(i) - lambda(j));
  const double pi = 3.141592653589793238462643;
  return 0.5 * m * m * std::log(pi) + lgamma(p.nm_half()) - half_n * p.sigma().log_det() -
         mv_gamma_ln(0.5 * m, m) - mv_gamma_ln(half_n, m) - p.log_gamma0() + log_vdm +
         (half_n - 0.5 * (m + 1)) * lambda.array().log().sum();
}

}  // namespace

SeriesValue eig_joint_logpdf(const WgdParams& p, const Vector& lambda, const Truncation& trunc) {
  const int m = p.dim();
  if (!check_spectrum(lambda, m)) {
    SeriesValue zero;
    zero.value = -std::numeric_limits<double>::infinity();
    zero.converged = true;
    return zero;
  }
  require_taylor(p.h());
  const Vector inv = p.sigma().inverse_spd().eigenvalues();
  const double si = inv.cwiseAbs().maxCoeff();
  const double sl = lambda.cwiseAbs().maxCoeff();
  const Vector inv_n = inv / si;
  const Vector lam_n = lambda / sl;
  const Vector ones = Vector::Ones(m);
  auto layer = [&](int k) -> std::optional<cd> {
    auto tt = taylor_term(p.h(), k);
    if (!tt) return std::nullopt;
    const auto a = zonal_layer(k, detail::span_of(inv_n));
    const auto b = zonal_layer(k, detail::span_of(lam_n));
    const auto c = zonal_layer(k, detail::span_of(ones));
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i] / c[i];
    return tt->second * std::exp(tt->first + k * std::log(si * sl)) * acc;
  };
  SeriesValue out = sum_series(layer, trunc, SeriesShape::Plain, "eigenvalue density");
  if (!(out.value.real() > 0.0)) {
    std::ostringstream os;
    os << "truncated eigenvalue density series is not positive (" << out.value.real() << ")";
    fail(ErrorKind::NonpositiveDensity, os.str());
  }
  out.value = eig_prefactor(p, lambda) + std::log(out.value.real());
  return out;
}

double eig_joint_logpdf_isotropic(const WgdParams& p, const Vector& lambda) {
  const int m = p.dim();
  if (!check_spectrum(lambda, m)) return -std::numeric_limits<double>::infinity();
  // For Sigma = c I the orthogonal average of h(tr Sigma^{-1} H Lambda H') is h(tr Lambda / c).
  const Vector& ev = p.sigma().eigenvalues();
  if (std::abs(ev(0) - ev(m - 1)) > 1e-12 * ev(0))
    fail(ErrorKind::DomainError, "isotropic eigenvalue density needs Sigma proportional to the identity");
  return eig_prefactor(p, lambda) + p.h().log_h(lambda.sum() / ev(0));
}

SeriesValue prob_less_than(const WgdParams& p, const SpdMatrix& a, const Truncation& trunc, Formula f) {
  const int m = p.dim();
  require_same_dim(a.dim(), m, "prob_less_than: A");
  require_taylor(p.h());
  const double s = p.nm_half();
  const double half_n = 0.5 * p.n();
  const double q = 0.5 * (m + 1);
  const Vector ev = product_eigenvalues(p.sigma().inverse(), a);
  double pref = lgamma(s) - mv_gamma_ln(half_n, m) - p.log_gamma0();
  std::function<double(const Partition&)> weight;
  if (f == Formula::AsPrinted) {
    pref -= half_n * p.sigma().log_det();
    weight = [&](const Partition& k) {
      return gamma_m_partition_ln(half_n, k, m) + gamma_m_partition_ln(q, k, m) -
             gamma_m_partition_ln(half_n + q, k, m);
    };
  } else {
    pref += half_n * ev.array().log().sum();
    const double gq = mv_gamma_ln(q, m);
    weight = [&, gq](const Partition& k) {
      return gamma_m_partition_ln(half_n, k, m) + gq - gamma_m_partition_ln(half_n + q, k, m);
    };
  }
  auto layer = [&](int k) -> std::optional<cd> {
    auto tt = taylor_term(p.h(), k);
    if (!tt) return std::nullopt;
    return tt->second * detail::weighted_zonal_layer(k, detail::span_of(ev), tt->first, weight);
  };
  SeriesValue out = scaled(sum_series(layer, trunc, SeriesShape::Plain, "P(X < A)"), pref);
  if (f == Formula::Corrected) {
    const double v = out.value.real();
    const double c = std::clamp(v, 0.0, 1.0);
    if (std::abs(c - v) > trunc.tolerance) out.clamped = true;
    out.value = c;
  }
  return out;
}

SeriesValue lmax_cdf(const WgdParams& p, double a, const Truncation& trunc, Formula f) {
  if (!(a > 0.0)) fail(ErrorKind::DomainError, "largest-eigenvalue CDF needs a > 0");
  return prob_less_than(p, SpdMatrix::scalar(p.dim(), a), trunc, f);
}

namespace {

void check_ratio_model(const RatioModel& r, int m) {
  if (!(r.n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "n must exceed m - 1");
  if (!(r.p > m - 1)) fail(ErrorKind::ParameterOutOfRange, "Wishart degrees of freedom p must exceed m - 1");
  if (!(r.alpha > 0.0) || !(r.beta > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha and beta must be positive");
}

double ratio_prefactor(const RatioModel& r, int m) {
  const double s = 0.5 * r.n * m;
  const double a = 0.5 * (r.n + r.p);
  const double log_k = lgamma(s) - mv_gamma_ln(0.5 * r.n, m) - r.h.log_mellin(s);
  return log_k + mv_gamma_ln(a, m) - 0.5 * r.p * m * std::log(2.0) - mv_gamma_ln(0.5 * r.p, m) +
         0.5 * r.p * m * std::log(r.alpha / r.beta);
}

SeriesValue ratio_series(const RatioModel& r, const Vector& ev, const Truncation& trunc, const std::string& what) {
  const int m = static_cast<int>(ev.size());
  const double a = 0.5 * (r.n + r.p);
  const double lr = std::log(r.alpha / (2.0 * r.beta));
  auto layer = [&](int k) -> std::optional<cd> {
    double mk;
    try {
      mk = r.h.log_mellin(a * m + k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DivergentIntegral) throw;
      fail(ErrorKind::AlternatingSeriesNotConverged, what + ": " + e.what());
    }
    const double base = k * lr - lgamma(k + 1.0) + mk - lgamma(a * m + k);
    return (k % 2 ? -1.0 : 1.0) * detail::weighted_zonal_layer(k, detail::span_of(ev), base, [&](const Partition& q) {
             return log_pochhammer_m(a, q, m);
           });
  };
  return sum_series(layer, trunc, SeriesShape::Alternating, what);
}

}  // namespace

SeriesValue ratio_b1_pdf(const RatioModel& model, const SpdMatrix& b1, const Truncation& trunc) {
  const int m = b1.dim();
  check_ratio_model(model, m);
  const double pref = ratio_prefactor(model, m) + (0.5 * model.p - 0.5 * (m + 1)) * b1.log_det();
  return scaled(ratio_series(model, b1.eigenvalues(), trunc, "B1 density"), pref);
}

SeriesValue ratio_b2_pdf(const RatioModel& model, const SpdMatrix& b2, const Truncation& trunc, Formula f) {
  const int m = b2.dim();
  check_ratio_model(model, m);
  if (!(b2.lambda_max() < 1.0)) fail(ErrorKind::DomainError, "B2 density needs I - B2 positive definite");
  const Vector& ev = b2.eigenvalues();
  const Vector shifted = (1.0 / ev.array() - 1.0).matrix();
  const double log_det_c = (1.0 - ev.array()).log().sum();
  const double det_power = f == Formula::AsPrinted ? -0.5 * model.n : -0.5 * model.p;
  const double pref = ratio_prefactor(model, m) + (det_power - 0.5 * (m + 1)) * b2.log_det() +
                      (0.5 * model.p - 0.5 * (m + 1)) * log_det_c;
  return scaled(ratio_series(model, shifted, trunc, "B2 density"), pref);
}

}  // namespace wgd
