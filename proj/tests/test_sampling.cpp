#include "test_util.hpp"
#include "wgd/error.hpp"
#include "wgd/sampling.hpp"

#include <doctest.h>

using namespace wgd;

TEST_SUITE("sampling") {
  TEST_CASE("streams are reproducible and distinct") {
    RngStream a(5, 0), b(5, 0), c(5, 1), d(6, 0);
    bool differ_stream = false, differ_seed = false;
    for (int i = 0; i < 100; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x > 0.0);
      CHECK(x < 1.0);
      differ_stream |= x != c.uniform();
      differ_seed |= x != d.uniform();
    }
    CHECK(differ_stream);
    CHECK(differ_seed);
  }

  TEST_CASE("gamma variates have the right mean") {
    RngStream rng(7, 0);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.gamma(2.5, 1.5);
    // mean 3.75, sd sqrt(2.5) * 1.5
    CHECK(std::abs(sum / n - 3.75) < 4 * std::sqrt(2.5) * 1.5 / std::sqrt(n));
  }

  TEST_CASE("Wishart and inverse Wishart means") {
    Matrix s(2, 2);
    s << 1.5, 0.3, 0.3, 0.8;
    const SpdMatrix sigma = SpdMatrix::from_entries(s);
    RngStream rng(8, 0);
    const int n = 100000;
    Matrix sum = Matrix::Zero(2, 2), sum_inv = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
      sum += sample_wishart(sigma, 4.0, rng).matrix();
      sum_inv += sample_inverse_wishart(sigma, 8.0, rng).matrix();
    }
    // Var of W_11 is 2 n s_11^2
    CHECK(std::abs(sum(0, 0) / n - 4.0 * 1.5) < 4 * std::sqrt(2 * 4.0 * 1.5 * 1.5 / n));
    CHECK(std::abs(sum(0, 1) / n - 4.0 * 0.3) < 0.02);
    CHECK((sum_inv / n - s / 5.0).cwiseAbs().maxCoeff() < 0.01);
  }

  TEST_CASE("directions have unit trace and mean I/m") {
    RngStream rng(9, 0);
    Matrix sum = Matrix::Zero(3, 3);
    for (int i = 0; i < 20000; ++i) {
      const SpdMatrix u = sample_direction(4.0, 3, rng);
      CHECK(u.trace() == doctest::Approx(1.0).epsilon(1e-12));
      sum += u.matrix();
    }
    CHECK((sum / 20000 - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 0.01);
  }

  TEST_CASE("radial samplers: closed-form and tabulated CDFs agree with the radial density") {
    const std::vector<ShapeGenerator> gens = {ShapeGenerator::exponential(), ShapeGenerator::t_prime(3.0, 3.0, 2),
                                              ShapeGenerator::kummer(1.0, 0.5, 3.0, 2),
                                              ShapeGenerator::sin_gaussian(1.0, 1.0)};
    for (const ShapeGenerator& h : gens) {
      CAPTURE(h.name());
      const RadialSampler rs(h, 3.0, 2);
      const double lo = h.support_lo();
      const double y = std::isfinite(h.support_hi()) ? 0.5 * h.support_hi() : 2.0;
      const double q = testutil::quad([&](double t) { return std::exp(radial_logpdf(h, 3.0, 2, t)); }, lo, y);
      CHECK(rs.cdf(y) == doctest::Approx(q).epsilon(1e-7));
    }
  }

  TEST_CASE("monte carlo is reproducible and honest") {
    const WgdParams p(SpdMatrix::identity(2), 3.0, ShapeGenerator::exponential());
    auto tr = [](const SpdMatrix& x) { return x.trace(); };
    const McEstimate a = mc_estimate(tr, p, 20000, 3), b = mc_estimate(tr, p, 20000, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.n_samples == 20000);
    CHECK(std::abs(a.mean - 6.0) < 4 * a.std_error);
    CHECK_THROWS_AS(mc_estimate(tr, p, 10, 3), Error);
  }

  TEST_CASE("sample_wgd returns the requested count in dimension") {
    const WgdParams p(SpdMatrix::identity(3), 4.0, ShapeGenerator::power(1.0, 0.5));
    RngStream rng(10, 0);
    const auto xs = sample_wgd(p, 7, rng);
    CHECK(xs.size() == 7);
    for (const auto& x : xs) CHECK(x.dim() == 3);
  }

  TEST_CASE("scale mixture proposal density integrates to one at m = 1") {
    const WishartScaleMixture w(SpdMatrix::scalar(1, 1.2), 3.0, 0.5);
    auto f = [&](double x) { return std::exp(w.logpdf(SpdMatrix::scalar(1, x))); };
    CHECK(testutil::quad(f, 0.0, 5.0) + testutil::quad(f, 5.0, testutil::kInf) == doctest::Approx(1.0).epsilon(1e-8));
  }
}
