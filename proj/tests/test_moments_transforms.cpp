#include "test_util.hpp"
#include "wgd/error.hpp"
#include "wgd/moments.hpp"

#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

using namespace wgd;
using testutil::random_spd;

namespace {

SpdMatrix sigma2() {
  Matrix s(2, 2);
  s << 1.5, 0.3, 0.3, 0.8;
  return SpdMatrix::from_entries(s);
}

Truncation deep(int k = 80) {
  Truncation t;
  t.max_degree = k;
  t.tolerance = 1e-13;
  return t;
}

}  // namespace

TEST_SUITE("moments_transforms") {
  TEST_CASE("Wishart determinant moments") {
    RngStream rng(31, 0);
    for (int t = 0; t < 20; ++t) {
      const int m = 1 + t % 4;
      const SpdMatrix s = random_spd(m, rng);
      const double n = m + 1.0 + 3 * rng.uniform();
      const WgdParams p(s, n, ShapeGenerator::exponential());
      for (double r : {0.5, 1.0, 2.0, -0.25}) {
        const double closed = r * m * std::log(2.0) + testutil::mvgamma_ln(0.5 * n + r, m) -
                              testutil::mvgamma_ln(0.5 * n, m) + r * s.log_det();
        CHECK(log_det_expectation(p, r) == doctest::Approx(closed).epsilon(1e-11));
      }
      CHECK(det_moment(p, 0.0) == 1.0);
      CHECK_THROWS_AS(det_moment(p, -0.5 * n + 0.5 * (m - 1) - 0.1), Error);
    }
  }

  TEST_CASE("Wishart trace moments") {
    const SpdMatrix s = sigma2();
    const double n = 3.0;
    const WgdParams p(s, n, ShapeGenerator::exponential());
    const double t1 = s.trace(), t2 = (s.matrix() * s.matrix()).trace();
    CHECK(trace_moment(p, 1.0, Truncation{}).real() == doctest::Approx(n * t1).epsilon(1e-12));
    CHECK(trace_moment(p, 2.0, Truncation{}).real() == doctest::Approx(n * n * t1 * t1 + 2 * n * t2).epsilon(1e-12));
    // Isotropic case: tr X / sigma^2 is chi-square with nm degrees of freedom.
    const WgdParams iso(SpdMatrix::scalar(2, 2.0), n, ShapeGenerator::exponential());
    const double r = 0.7;
    const double closed = std::exp(r * std::log(4.0) + std::lgamma(3.0 + r) - std::lgamma(3.0));
    CHECK(trace_moment(iso, r, deep()).real() == doctest::Approx(closed).epsilon(1e-10));
    // E tr X = n tr Sigma gamma_1 / (nm/2 gamma_0)-type expectation, checked for t_prime by E y.
    const ShapeGenerator h = ShapeGenerator::t_prime(4.0, n, 2);
    const WgdParams tp(s, n, h);
    const double ey = std::exp(h.log_mellin(n + 1.0) - h.log_mellin(n));
    CHECK(trace_moment(tp, 1.0, Truncation{}).real() == doctest::Approx(ey * t1 / 2.0).epsilon(1e-10));
  }

  TEST_CASE("zonal expectations sum to the trace moment") {
    const SpdMatrix s = sigma2();
    const WgdParams p(s, 3.0, ShapeGenerator::power(1.0, 0.7));
    for (int k = 1; k <= 3; ++k) {
      double sum = 0.0;
      for (const Partition& kap : partitions_of(k, 2)) sum += zonal_expectation(p, kap);
      CHECK(sum == doctest::Approx(trace_moment(p, k, Truncation{}).real()).epsilon(1e-10));
    }
  }

  TEST_CASE("characteristic function and Laplace transform of the Wishart") {
    RngStream rng(32, 0);
    for (int t = 0; t < 10; ++t) {
      const int m = 1 + t % 3;
      const SpdMatrix s = random_spd(m, rng);
      Matrix tm = testutil::random_symmetric(m, rng);
      tm *= 0.2 / (tm * s.matrix()).eigenvalues().cwiseAbs().maxCoeff();
      const SymMatrix tt = SymMatrix::from_entries(tm);
      const double n = m + 1.0;
      const WgdParams p(s, n, ShapeGenerator::exponential());
      const SeriesValue cf = cf_series(p, tt, deep());
      const std::complex<double> closed = wishart_cf_closed(s, n, tt);
      CHECK(std::abs(cf.value - closed) < 1e-11);
      const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd::Identity(m, m) -
                                                            std::complex<double>(0, 2) * tm.cast<std::complex<double>>() *
                                                                s.matrix().cast<std::complex<double>>());
      std::complex<double> ld = 0.0;
      for (int i = 0; i < m; ++i) ld += std::log(es.eigenvalues()(i));
      CHECK(std::abs(closed - std::exp(-0.5 * n * ld)) < 1e-12);
      // The series runs in powers of Sigma^{-1} / s, so s must be large.
      const double sv = 2.0 / s.lambda_min();
      const double lap = std::pow((Matrix::Identity(m, m) + 2 * sv * s.matrix()).determinant(), -0.5 * n);
      CHECK(laplace_series(p, sv, deep()).real() == doctest::Approx(lap).epsilon(1e-10));
    }
    const WgdParams p(SpdMatrix::identity(2), 3.0, ShapeGenerator::exponential());
    CHECK(cf_series(p, SymMatrix::zero(2), Truncation{}).value == std::complex<double>(1.0, 0.0));
  }

  TEST_CASE("Laplace transform of t_prime diverges") {
    const WgdParams p(SpdMatrix::identity(2), 3.0, ShapeGenerator::t_prime(2.0, 3.0, 2));
    CHECK_THROWS_AS(laplace_series(p, 0.3, Truncation{}), Error);
  }

  TEST_CASE("probability of X < A at m = 1 is the chi-square CDF") {
    for (double a : {0.5, 2.0, 6.0}) {
      const WgdParams p(SpdMatrix::scalar(1, 1.3), 3.0, ShapeGenerator::exponential());
      const SeriesValue v = prob_less_than(p, SpdMatrix::scalar(1, a), deep(120));
      CHECK(v.real() == doctest::Approx(boost::math::gamma_p(1.5, a / 2.6)).epsilon(1e-10));
    }
  }

  TEST_CASE("largest eigenvalue CDF is monotone and bounded") {
    const WgdParams p(SpdMatrix::identity(2), 3.0, ShapeGenerator::exponential());
    double prev = 0.0;
    for (double a : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double v = lmax_cdf(p, a, deep(150)).real();
      CHECK(v >= prev);
      CHECK(v <= 1.0);
      prev = v;
    }
  }

  TEST_CASE("trace density series matches the exact isotropic density") {
    const double n = 3.0;
    const WgdParams p(SpdMatrix::scalar(2, 1.0), n, ShapeGenerator::exponential());
    for (double y : {0.5, 2.0, 5.0}) {
      const double exact = trace_pdf_exact_iso(1.0, n, 2, p.h(), y);
      CHECK(trace_pdf(p, y, deep(150)).real() == doctest::Approx(exact).epsilon(1e-9));
      // chi-square with 6 degrees of freedom
      CHECK(exact == doctest::Approx(y * y * std::exp(-y / 2) / 16.0).epsilon(1e-12));
    }
  }

  TEST_CASE("eigenvalue density at Sigma = I") {
    const WgdParams p(SpdMatrix::identity(2), 4.0, ShapeGenerator::exponential());
    Vector lam(2);
    lam << 0.9, 0.4;
    CHECK(eig_joint_logpdf(p, lam, deep(120)).real() == doctest::Approx(eig_joint_logpdf_isotropic(p, lam)).epsilon(1e-9));
    Vector bad(2);
    bad << 0.4, 0.9;
    CHECK_THROWS_AS(eig_joint_logpdf(p, bad, Truncation{}), Error);
  }

  TEST_CASE("ratio densities at m = 1") {
    const RatioModel model{ShapeGenerator::exponential(), 3.0, 1.0, 1.0, 2.0};
    Truncation t = deep(200);
    // B1 is beta-prime(p/2, n/2) and B2 is Beta(n/2, p/2).
    for (double b : {0.2, 0.5}) {
      const double bp = std::pow(b, 0.0) * std::pow(1 + b, -2.5) / boost::math::beta(1.0, 1.5);
      CHECK(ratio_b1_pdf(model, SpdMatrix::scalar(1, b), t).real() == doctest::Approx(bp).epsilon(1e-7));
    }
    for (double b : {0.7, 0.9}) {
      const double be = std::pow(b, 0.5) * std::pow(1 - b, 0.0) / boost::math::beta(1.5, 1.0);
      CHECK(ratio_b2_pdf(model, SpdMatrix::scalar(1, b), t).real() == doctest::Approx(be).epsilon(1e-7));
    }
  }
}
