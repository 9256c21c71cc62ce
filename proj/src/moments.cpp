#include "wgd/moments.hpp"

#include "wgd/error.hpp"
#include "zonal_sums.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>

namespace wgd {

namespace {

using boost::math::lgamma;

double log_pochhammer_m(double a, const Partition& kappa, int m) {
  return gamma_m_partition_ln(a, kappa, m) - mv_gamma_ln(a, m);
}

}  // namespace

double log_det_expectation(const WgdParams& p, double r) {
  const int m = p.dim();
  const double a = r + 0.5 * p.n();
  if (!(a > 0.5 * (m - 1))) {
    std::ostringstream os;
    os << "det moment needs r + n/2 > (m-1)/2, got r = " << r;
    fail(ErrorKind::DomainError, os.str());
  }
  if (r == 0.0) return 0.0;
  const double s = p.nm_half();
  return lgamma(s) + mv_gamma_ln(a, m) - lgamma(a * m) - mv_gamma_ln(0.5 * p.n(), m) + p.h().log_mellin(a * m) -
         p.log_gamma0() + r * p.sigma().log_det();
}

double det_moment(const WgdParams& p, double r) { return std::exp(log_det_expectation(p, r)); }

double zonal_expectation(const WgdParams& p, const Partition& kappa, Formula f) {
  const int m = p.dim();
  if (kappa.length() > m) return 0.0;
  const Vector& ev = p.sigma().eigenvalues();
  const double c = zonal(kappa, detail::span_of(ev));
  const double s = p.nm_half();
  const int k = kappa.weight();
  if (f == Formula::AsPrinted) return std::exp(lgamma(s) - mv_gamma_ln(0.5 * p.n(), m) - p.log_gamma0()) * c;
  const double lw = lgamma(s) + log_pochhammer_m(0.5 * p.n(), kappa, m) + p.h().log_mellin(s + k) -
                    p.log_gamma0() - lgamma(s + k);
  return std::exp(lw) * c;
}

SeriesValue trace_moment(const WgdParams& p, double r, const Truncation& trunc, Formula f) {
  const int m = p.dim();
  const double s = p.nm_half();
  const double half_n = 0.5 * p.n();
  if (f == Formula::AsPrinted) {
    const Vector inv = p.sigma().inverse_spd().eigenvalues();
    const double pref = lgamma(s) - half_n * p.sigma().log_det() - p.log_gamma0();
    auto layer = [&](int k) -> std::optional<std::complex<double>> {
      const double base = pref + lgamma(s + k + r) - lgamma(k + 1.0) - lgamma(s + k);
      return detail::weighted_zonal_layer(k, detail::span_of(inv), base,
                                          [&](const Partition& q) { return log_pochhammer_m(half_n, q, m); });
    };
    return sum_series(layer, trunc, SeriesShape::Plain, "trace moment (as printed)");
  }
  if (r == 0.0) {
    SeriesValue one;
    one.value = 1.0;
    one.terms_used = 1;
    one.converged = true;
    return one;
  }
  if (!(s + r > 0.0)) {
    std::ostringstream os;
    os << "trace moment of order " << r << " needs r > -nm/2";
    fail(ErrorKind::DomainError, os.str());
  }
  const double radial = p.h().log_mellin(s + r) - p.log_gamma0();
  // tr(Sigma U) = c (1 - tr(D U)) with D = I - Sigma / c and tr U = 1.
  const Vector& ev = p.sigma().eigenvalues();
  const double c = 0.5 * (p.sigma().lambda_max() + p.sigma().lambda_min());
  Vector d = (1.0 - ev.array() / c).matrix();
  const bool integer_r = r > 0 && std::floor(r) == r;
  auto layer = [&](int j) -> std::optional<std::complex<double>> {
    if (integer_r && j > r) return std::complex<double>(0.0);
    double coef = 1.0;  // (-r)_j / j!
    for (int i = 0; i < j; ++i) coef *= (-r + i) / (i + 1);
    if (coef == 0.0) return std::nullopt;
    auto v = detail::weighted_zonal_layer(j, detail::span_of(d), lgamma(s) - lgamma(s + j),
                                          [&](const Partition& q) { return log_pochhammer_m(half_n, q, m); });
    return coef * v;
  };
  SeriesValue out = sum_series(layer, trunc, SeriesShape::Plain, "trace moment");
  out.value *= std::exp(radial + r * std::log(c));
  return out;
}

SeriesValue trace_pdf(const WgdParams& p, double y, const Truncation& trunc, Formula f) {
  if (!(y > 0.0)) fail(ErrorKind::DomainError, "trace density needs y > 0");
  const int m = p.dim();
  const double s = p.nm_half();
  const double half_n = 0.5 * p.n();
  const Vector inv = p.sigma().inverse_spd().eigenvalues();
  const double pref = lgamma(s) - half_n * p.sigma().log_det() - p.log_gamma0() + (s - 1.0) * std::log(y);
  auto weight = [&](const Partition& q) { return log_pochhammer_m(half_n, q, m); };
  if (f == Formula::AsPrinted) {
    auto layer = [&](int k) -> std::optional<std::complex<double>> {
      const double base = pref - y + k * std::log(y) - lgamma(k + 1.0) - lgamma(s + k);
      return detail::weighted_zonal_layer(k, detail::span_of(inv), base, weight);
    };
    return sum_series(layer, trunc, SeriesShape::Plain, "trace density (as printed)");
  }
  const ShapeGenerator& h = p.h();
  if (!h.has_taylor()) fail(ErrorKind::NoTaylorExpansion, h.name() + " generator has no Taylor expansion at 0");
  auto layer = [&](int k) -> std::optional<std::complex<double>> {
    auto rk = h.taylor_ratio(k);
    if (!rk || *rk == 0.0) return std::nullopt;
    const double base = pref + std::log(std::abs(*rk)) + k * std::log(y) - lgamma(s + k);
    return (*rk < 0 ? -1.0 : 1.0) * detail::weighted_zonal_layer(k, detail::span_of(inv), base, weight);
  };
  return sum_series(layer, trunc, SeriesShape::Plain, "trace density");
}

double trace_pdf_exact_iso(double sigma2, double n, int m, const ShapeGenerator& h, double y) {
  if (!(sigma2 > 0.0)) fail(ErrorKind::DomainError, "sigma^2 must be positive");
  if (!(n > m - 1)) fail(ErrorKind::ParameterOutOfRange, "degrees of freedom must exceed m - 1");
  if (!(y > 0.0)) return 0.0;
  const double s = 0.5 * n * m;
  const double lh = h.log_h(y / sigma2);
  if (!std::isfinite(lh)) return 0.0;
  return std::exp((s - 1.0) * std::log(y) + lh - s * std::log(sigma2) - h.log_mellin(s));
}

}  // namespace wgd
