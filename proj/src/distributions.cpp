#include "wgd/distributions.hpp"

#include "wgd/error.hpp"
#include "wgd/partitions_zonal.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>

namespace wgd {

namespace {

double checked_log_h(const ShapeGenerator& h, double t) {
  double v = h.log_h(t);
  if (!(v > -std::numeric_limits<double>::infinity()) || std::isnan(v)) {
    std::ostringstream os;
    os << h.name() << " generator is not positive at tr(Sigma^-1 X) = " << t;
    fail(ErrorKind::DomainError, os.str());
  }
  return v;
}

// log of the common factor Gamma(s+k)/Gamma(s) and gamma_k/gamma_0 ratios
// appearing in every layer of the normalizer series.
double layer_weight_ln(const WgdParams& p, int k) {
  const double s = p.nm_half();
  return p.h().log_mellin(s + k) - p.log_gamma0() - (boost::math::lgamma(s + k) - boost::math::lgamma(s)) -
         boost::math::lgamma(k + 1.0);
}

}  // namespace

WgdParams::WgdParams(SpdMatrix sigma, double n, ShapeGenerator h) : sigma_(std::move(sigma)), n_(n), h_(std::move(h)) {
  const int m = sigma_.dim();
  if (!(n_ > m - 1)) {
    std::ostringstream os;
    os << "degrees of freedom must exceed m - 1 = " << m - 1 << ", got " << n_;
    fail(ErrorKind::ParameterOutOfRange, os.str());
  }
  MellinValue g0 = h_.mellin(nm_half());
  log_gamma0_ = g0.log_value;
  gamma0_analytic_ = g0.analytic;
}

double wgd_log_normalizer(const WgdParams& p) {
  return boost::math::lgamma(p.nm_half()) - mv_gamma_ln(0.5 * p.n(), p.dim()) - p.log_gamma0();
}

double wgd_logpdf(const WgdParams& p, const SpdMatrix& x) {
  require_same_dim(x.dim(), p.dim(), "wgd_logpdf");
  const int m = p.dim();
  double t = p.sigma().trace_inverse_times(x.matrix());
  return wgd_log_normalizer(p) - 0.5 * p.n() * p.sigma().log_det() + (0.5 * p.n() - 0.5 * (m + 1)) * x.log_det() +
         checked_log_h(p.h(), t);
}

double iwgd_logpdf(const WgdParams& p, const SpdMatrix& y) {
  require_same_dim(y.dim(), p.dim(), "iwgd_logpdf");
  const int m = p.dim();
  double t = p.sigma().trace_inverse_times(y.inverse());
  return wgd_log_normalizer(p) - 0.5 * p.n() * p.sigma().log_det() - (0.5 * p.n() + 0.5 * (m + 1)) * y.log_det() +
         checked_log_h(p.h(), t);
}

double ggd_log_normalizer(const GgdParams& p, Formula f) {
  const int m = p.sigma.dim();
  if (!(p.alpha > 0.5 * (m - 1))) fail(ErrorKind::ParameterOutOfRange, "GGD needs alpha > (m-1)/2");
  if (!(p.beta > 0)) fail(ErrorKind::ParameterOutOfRange, "GGD needs beta > 0");
  const double s = m * p.alpha;
  double r = boost::math::lgamma(s) - p.h.log_mellin(s) - mv_gamma_ln(p.alpha, m) - p.alpha * p.sigma.log_det();
  if (f == Formula::Corrected) r += s * std::log(2.0 * p.beta);
  return r;
}

double ggd_logpdf(const GgdParams& p, const SpdMatrix& z, Formula f) {
  require_same_dim(z.dim(), p.sigma.dim(), "ggd_logpdf");
  const int m = p.sigma.dim();
  double t = 2.0 * p.beta * p.sigma.trace_inverse_times(z.matrix());
  return ggd_log_normalizer(p, f) + (p.alpha - 0.5 * (m + 1)) * z.log_det() + checked_log_h(p.h, t);
}

double iggd_logpdf(const GgdParams& p, const SpdMatrix& y, Formula f) {
  require_same_dim(y.dim(), p.sigma.dim(), "iggd_logpdf");
  const int m = p.sigma.dim();
  double t = 2.0 * p.beta * p.sigma.trace_inverse_times(y.inverse());
  return ggd_log_normalizer(p, f) - (p.alpha + 0.5 * (m + 1)) * y.log_det() + checked_log_h(p.h, t);
}

SeriesValue ncwgd_log_normalizer(const WgdParams& p, const SymMatrix& psi, const Truncation& trunc) {
  require_same_dim(psi.dim(), p.dim(), "ncwgd");
  Vector ev = psi.eigenvalues();
  if (ev(ev.size() - 1) < -1e-12 * std::max(1.0, std::abs(ev(0))))
    fail(ErrorKind::NotPositiveDefinite, "non-centrality matrix must be positive semidefinite");
  std::vector<double> e(ev.data(), ev.data() + ev.size());
  SeriesValue sv = sum_series(
      [&](int k) -> std::optional<std::complex<double>> {
        if (k == 0) return std::complex<double>(1.0);
        double tr = 0.0;
        for (double c : zonal_layer(k, e)) tr += c;
        return std::exp(layer_weight_ln(p, k) - k * std::log(4.0)) * tr;
      },
      trunc, SeriesShape::Plain, "non-central normalizer");
  // value: log l_{n,m} (without the |Sigma| factor)
  sv.value = wgd_log_normalizer(p) - std::log(sv.value.real());
  return sv;
}

SeriesLogDensity ncwgd_logpdf(const WgdParams& p, const SymMatrix& psi, const SpdMatrix& x, const Truncation& trunc) {
  require_same_dim(x.dim(), p.dim(), "ncwgd_logpdf");
  SeriesLogDensity out;
  out.normalizer = ncwgd_log_normalizer(p, psi, trunc);
  const int m = p.dim();
  double base = out.normalizer.real() - 0.5 * p.n() * p.sigma().log_det() +
                (0.5 * p.n() - 0.5 * (m + 1)) * x.log_det() +
                checked_log_h(p.h(), p.sigma().trace_inverse_times(x.matrix()));
  if (psi.is_zero()) {
    out.logpdf = base;
    return out;
  }
  Matrix arg = 0.25 * psi.matrix() * p.sigma().inverse() * x.matrix();
  Eigen::EigenSolver<Matrix> es(arg, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  SeriesValue kernel = hypergeom_matrix({}, {0.5 * p.n()}, ev, trunc);
  out.kernel = kernel;
  out.logpdf = base + std::log(kernel.value.real());
  return out;
}

SeriesValue hwgd_log_normalizer(const WgdParams& p, const std::vector<double>& a, const std::vector<double>& b,
                                const SymMatrix& omega, const Truncation& trunc) {
  require_same_dim(omega.dim(), p.dim(), "hwgd");
  if (a.size() > b.size()) fail(ErrorKind::ParameterOutOfRange, "hypergeometric WGD needs p <= q");
  const int m = p.dim();
  const double half_n = 0.5 * p.n();
  Vector ev = product_eigenvalues(omega.matrix(), p.sigma());
  std::vector<double> e(ev.data(), ev.data() + ev.size());
  SeriesValue sv = sum_series(
      [&](int k) -> std::optional<std::complex<double>> {
        if (k == 0) return std::complex<double>(1.0);
        auto parts = partitions_of(k, m);
        auto c = zonal_layer(k, e);
        double acc = 0.0;
        for (size_t i = 0; i < parts.size(); ++i) {
          double coeff = gen_pochhammer(half_n, parts[i]);
          for (double ai : a) coeff *= gen_pochhammer(ai, parts[i]);
          for (double bj : b) coeff /= gen_pochhammer(bj, parts[i]);
          acc += coeff * c[i];
        }
        return std::exp(layer_weight_ln(p, k)) * acc;
      },
      trunc, SeriesShape::Plain, "hypergeometric WGD normalizer");
  if (!(sv.value.real() > 0)) fail(ErrorKind::DivergenceSuspected, "normalizer series is not positive");
  sv.value = wgd_log_normalizer(p) - std::log(sv.value.real());
  return sv;
}

SeriesLogDensity hwgd_logpdf(const WgdParams& p, const std::vector<double>& a, const std::vector<double>& b,
                             const SymMatrix& omega, const SpdMatrix& x, const Truncation& trunc) {
  require_same_dim(x.dim(), p.dim(), "hwgd_logpdf");
  SeriesLogDensity out;
  out.normalizer = hwgd_log_normalizer(p, a, b, omega, trunc);
  const int m = p.dim();
  double base = out.normalizer.real() - 0.5 * p.n() * p.sigma().log_det() +
                (0.5 * p.n() - 0.5 * (m + 1)) * x.log_det() +
                checked_log_h(p.h(), p.sigma().trace_inverse_times(x.matrix()));
  if (omega.is_zero()) {
    out.logpdf = base;
    return out;
  }
  Vector ev = product_eigenvalues(omega.matrix(), x);
  double kernel_ln;
  if (a.empty() && b.empty()) {
    kernel_ln = ev.sum();
  } else {
    std::vector<double> e(ev.data(), ev.data() + ev.size());
    SeriesValue kernel = hypergeom_matrix(a, b, e, trunc);
    if (!(kernel.value.real() > 0)) fail(ErrorKind::DomainError, "hypergeometric factor is not positive at X");
    kernel_ln = std::log(kernel.value.real());
    out.kernel = kernel;
  }
  out.logpdf = base + kernel_ln;
  return out;
}

SeriesLogDensity exp_wgd_logpdf(const WgdParams& p, const SymMatrix& omega, const SpdMatrix& x,
                                const Truncation& trunc) {
  return hwgd_logpdf(p, {}, {}, omega, x, trunc);
}

double wishart_logpdf(const SpdMatrix& sigma, double n, const SpdMatrix& x) {
  require_same_dim(x.dim(), sigma.dim(), "wishart_logpdf");
  const int m = sigma.dim();
  return -0.5 * n * m * std::log(2.0) - mv_gamma_ln(0.5 * n, m) - 0.5 * n * sigma.log_det() +
         0.5 * (n - m - 1) * x.log_det() - 0.5 * sigma.trace_inverse_times(x.matrix());
}

double inverse_wishart_logpdf(const SpdMatrix& psi, double nu, const SpdMatrix& u) {
  require_same_dim(u.dim(), psi.dim(), "inverse_wishart_logpdf");
  const int m = psi.dim();
  return 0.5 * nu * psi.log_det() - 0.5 * nu * m * std::log(2.0) - mv_gamma_ln(0.5 * nu, m) -
         0.5 * (nu + m + 1) * u.log_det() - 0.5 * (psi.matrix() * u.inverse()).trace();
}

}  // namespace wgd
