#pragma once

#include "wgd/matrix_core.hpp"
#include "wgd/sampling.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <limits>

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline wgd::Matrix random_matrix(int m, wgd::RngStream& rng) {
  wgd::Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
  return a;
}

inline wgd::Matrix random_symmetric(int m, wgd::RngStream& rng) {
  const wgd::Matrix a = random_matrix(m, rng);
  return 0.5 * (a + a.transpose());
}

inline wgd::SpdMatrix random_spd(int m, wgd::RngStream& rng, double ridge = 0.3) {
  const wgd::Matrix a = random_matrix(m, rng);
  return wgd::SpdMatrix::from_entries(a * a.transpose() / m + ridge * wgd::Matrix::Identity(m, m));
}

// Double-exponential rules cope with integrable endpoint singularities and
// algebraic tails.
inline double quad(const std::function<double(double)>& f, double a, double b) {
  if (std::isfinite(b)) return boost::math::quadrature::tanh_sinh<double>().integrate(f, a, b, 1e-13);
  return boost::math::quadrature::exp_sinh<double>().integrate([&](double t) { return f(a + t); }, 1e-13);
}

inline double mvgamma_ln(double a, int m) {
  double r = 0.25 * m * (m - 1) * std::log(kPi);
  for (int i = 0; i < m; ++i) r += std::lgamma(a - 0.5 * i);
  return r;
}

inline double logdet(const wgd::Matrix& a) { return std::log(a.determinant()); }

}  // namespace testutil
