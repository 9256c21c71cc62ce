#pragma once

#include <functional>
#include <limits>
#include <string>

namespace wgd {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (61 point) on [a, b]; either end may be infinite.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

struct LogQuadResult {
  double log_value = 0.0;
  double rel_error = 0.0;
};

// log of int_lo^hi exp(log_f(y)) dy for 0 <= lo < hi <= inf. The integral is
// taken in u = log y after locating the peak of the integrand, so it copes
// with integrands whose mass sits far from 1. log_f may return -inf.
// Throws DivergentIntegral if the integrand does not decay at an open end.
LogQuadResult log_integrate_positive(const std::function<double(double)>& log_f, double lo, double hi,
                                     const std::string& what);

}  // namespace wgd
