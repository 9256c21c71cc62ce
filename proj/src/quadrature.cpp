#include "wgd/quadrature.hpp"

#include "wgd/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace wgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScanLo = -745.0;
constexpr double kScanHi = 709.0;
constexpr double kScanStep = 0.5;
constexpr double kDrop = 60.0;

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  QuadResult r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol, &r.error, &l1);
  return r;
}

LogQuadResult log_integrate_positive(const std::function<double(double)>& log_f, double lo, double hi,
                                     const std::string& what) {
  if (!(lo >= 0.0) || !(hi > lo)) fail(ErrorKind::DomainError, what + ": bad integration range");
  const double u_lo = lo > 0 ? std::log(lo) : -kInf;
  const double u_hi = std::isfinite(hi) ? std::log(hi) : kInf;
  auto g = [&](double u) {
    double v = log_f(std::exp(u)) + u;
    return std::isnan(v) ? -kInf : v;
  };

  const double s_lo = std::max(u_lo, kScanLo);
  const double s_hi = std::min(u_hi, kScanHi);
  const int n = std::max(2, static_cast<int>(std::ceil((s_hi - s_lo) / kScanStep)) + 1);
  std::vector<double> us(n), gs(n);
  int best = -1;
  for (int i = 0; i < n; ++i) {
    us[i] = (i == n - 1) ? s_hi : s_lo + i * (s_hi - s_lo) / (n - 1);
    // Endpoints of a finite support are evaluated just inside.
    double u = us[i];
    if (i == 0 && std::isfinite(u_lo)) u = u_lo + 1e-12 * std::max(1.0, std::abs(u_lo));
    if (i == n - 1 && std::isfinite(u_hi)) u = u_hi - 1e-12 * std::max(1.0, std::abs(u_hi));
    gs[i] = g(u);
    if (gs[i] == kInf) fail(ErrorKind::DivergentIntegral, what + ": integrand is infinite");
    if (std::isfinite(gs[i]) && (best < 0 || gs[i] > gs[best])) best = i;
  }
  if (best < 0) fail(ErrorKind::NonpositiveDensity, what + ": integrand vanishes on the whole range");
  const double gmax = gs[best];

  // An open end must show decay towards the boundary of the scan.
  if (!std::isfinite(u_lo) && gs[0] >= gmax - kDrop && gs[0] >= gs[1])
    fail(ErrorKind::DivergentIntegral, what + ": integrand does not decay towards 0");
  if (!std::isfinite(u_hi) && gs[n - 1] >= gmax - kDrop && gs[n - 1] >= gs[n - 2])
    fail(ErrorKind::DivergentIntegral, what + ": integrand does not decay towards infinity");

  int left = best, right = best;
  while (left > 0 && !(gs[left] < gmax - kDrop)) --left;
  while (right < n - 1 && !(gs[right] < gmax - kDrop)) ++right;
  double a = us[left], b = us[right];
  if (left == 0) a = std::isfinite(u_lo) ? u_lo : -kInf;
  if (right == n - 1) b = std::isfinite(u_hi) ? u_hi : kInf;
  // Left end already below the threshold: still open if the domain is.
  if (left == 0 && !std::isfinite(u_lo) && gs[0] < gmax - kDrop) a = us[0];
  if (right == n - 1 && !std::isfinite(u_hi) && gs[n - 1] < gmax - kDrop) b = us[n - 1];

  auto f = [&](double u) {
    double v = g(u) - gmax;
    return v < -745.0 ? 0.0 : std::exp(v);
  };
  std::vector<double> cuts{a};
  double mode = us[best];
  if (mode > a && mode < b) cuts.push_back(mode);
  if (0.0 > a && 0.0 < b && std::abs(mode) > 1e-8) cuts.push_back(0.0);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0, err = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    QuadResult piece = integrate(f, cuts[i], cuts[i + 1], 1e-12);
    total += piece.value;
    err += piece.error;
  }
  if (!std::isfinite(total) || !(total > 0)) {
    std::ostringstream os;
    os << what << ": quadrature failed (value " << total << ")";
    fail(ErrorKind::DivergentIntegral, os.str());
  }
  LogQuadResult out;
  out.log_value = gmax + std::log(total);
  out.rel_error = err / total;
  if (!(out.rel_error < 1e-6)) {
    std::ostringstream os;
    os << what << ": quadrature error estimate " << out.rel_error << " too large";
    fail(ErrorKind::DivergentIntegral, os.str());
  }
  return out;
}

}  // namespace wgd
