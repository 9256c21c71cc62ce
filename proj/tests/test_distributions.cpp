#include "test_util.hpp"
#include "wgd/distributions.hpp"
#include "wgd/error.hpp"

#include <doctest.h>

using namespace wgd;
using testutil::random_spd;

namespace {

double wishart_oracle(const SpdMatrix& sigma, double n, const SpdMatrix& x) {
  const int m = sigma.dim();
  return -0.5 * n * m * std::log(2.0) - testutil::mvgamma_ln(0.5 * n, m) - 0.5 * n * testutil::logdet(sigma.matrix()) +
         0.5 * (n - m - 1) * testutil::logdet(x.matrix()) - 0.5 * (sigma.matrix().inverse() * x.matrix()).trace();
}

double integrate_m1(const std::function<double(double)>& logf, double lo, double hi) {
  auto f = [&](double x) {
    const double v = logf(x);
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  const double mid = std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 4.0;
  return testutil::quad(f, lo, mid) + testutil::quad(f, mid, hi);
}

}  // namespace

TEST_SUITE("distributions") {
  TEST_CASE("exponential generator gives the Wishart density") {
    RngStream rng(21, 0);
    for (int t = 0; t < 100; ++t) {
      const int m = 1 + t % 4;
      const SpdMatrix sigma = random_spd(m, rng), x = random_spd(m, rng);
      const double n = m + 0.5 + 5 * rng.uniform();
      const WgdParams p(sigma, n, ShapeGenerator::exponential());
      CHECK(wgd_logpdf(p, x) == doctest::Approx(wishart_oracle(sigma, n, x)).epsilon(1e-12));
      CHECK(wishart_logpdf(sigma, n, x) == doctest::Approx(wishart_oracle(sigma, n, x)).epsilon(1e-12));
    }
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(WgdParams(SpdMatrix::identity(3), 1.5, ShapeGenerator::exponential()), Error);
    // (1 + y)^{-c} with c <= nm/2 has no finite normalizer.
    CHECK_THROWS_AS(WgdParams(SpdMatrix::identity(2), 3.0, ShapeGenerator::t_prime_exponent(2.0)), Error);
    const WgdParams p(SpdMatrix::identity(2), 3.0, ShapeGenerator::exponential());
    CHECK_THROWS_AS(wgd_logpdf(p, SpdMatrix::identity(3)), Error);
  }

  TEST_CASE("one-dimensional densities integrate to one") {
    const std::vector<ShapeGenerator> gens = {ShapeGenerator::t_prime(2.0, 5.0, 1), ShapeGenerator::power(0.7, 1.5),
                                              ShapeGenerator::kummer(1.0, 0.5, 5.0, 1),
                                              ShapeGenerator::logistic(1.0, 1.0),
                                              ShapeGenerator::sin_gaussian(1.0, 1.0), ShapeGenerator::log_exp(),
                                              ShapeGenerator::hypergeom_exp({1.5}, {2.5}, 0.5)};
    const double s = 0.8;
    for (const ShapeGenerator& h : gens) {
      CAPTURE(h.name());
      const WgdParams p(SpdMatrix::scalar(1, s), 5.0, h);
      const double total = integrate_m1(
          [&](double x) { return h.in_support(x / s) ? wgd_logpdf(p, SpdMatrix::scalar(1, x)) : -testutil::kInf; },
          s * h.support_lo(), s * h.support_hi());
      CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  TEST_CASE("inverse density is the change of variables") {
    RngStream rng(22, 0);
    const SpdMatrix sigma = random_spd(3, rng), y = random_spd(3, rng);
    const WgdParams p(sigma, 5.0, ShapeGenerator::power(1.0, 0.5));
    CHECK(iwgd_logpdf(p, y) ==
          doctest::Approx(wgd_logpdf(p, y.inverse_spd()) - 4.0 * y.log_det()).epsilon(1e-12));
  }

  TEST_CASE("generalized family reduces to the WGD") {
    RngStream rng(23, 0);
    const SpdMatrix sigma = random_spd(2, rng), z = random_spd(2, rng);
    const double n = 4.0;
    const ShapeGenerator h = ShapeGenerator::exponential();
    // alpha = n/2, beta = 1/2 is the WGD itself.
    const GgdParams g{sigma, 0.5 * n, 0.5, h};
    CHECK(ggd_logpdf(g, z) == doctest::Approx(wgd_logpdf(WgdParams(sigma, n, h), z)).epsilon(1e-12));
    // Scaling beta is a rescaling of Sigma.
    const GgdParams g2{sigma, 0.5 * n, 1.5, h};
    CHECK(ggd_logpdf(g2, z) == doctest::Approx(wgd_logpdf(WgdParams(sigma.scaled(1.0 / 3.0), n, h), z)).epsilon(1e-12));
    CHECK(ggd_logpdf(g2, z, Formula::AsPrinted) != doctest::Approx(ggd_logpdf(g2, z)));
    CHECK(iggd_logpdf(g2, z) == doctest::Approx(ggd_logpdf(g2, z.inverse_spd()) - 3.0 * z.log_det()).epsilon(1e-12));
  }

  TEST_CASE("noncentral density with zero noncentrality is central") {
    RngStream rng(24, 0);
    const SpdMatrix sigma = random_spd(2, rng), x = random_spd(2, rng);
    const WgdParams p(sigma, 3.0, ShapeGenerator::exponential());
    const SeriesLogDensity d = ncwgd_logpdf(p, SymMatrix::zero(2), x, Truncation{});
    CHECK(d.logpdf == doctest::Approx(wgd_logpdf(p, x)).epsilon(1e-10));
  }

  TEST_CASE("noncentral Wishart normalizer is etr(-Sigma^{-1} Psi / 2)") {
    const SpdMatrix sigma = SpdMatrix::scalar(1, 1.0);
    const double n = 3.0, psi = 0.8;
    const WgdParams p(sigma, n, ShapeGenerator::exponential());
    Truncation trunc;
    trunc.max_degree = 60;
    const SeriesLogDensity d = ncwgd_logpdf(p, SymMatrix::from_entries(Matrix::Constant(1, 1, psi)),
                                            SpdMatrix::scalar(1, 1.0), trunc);
    // Noncentral chi-square with 3 degrees of freedom and noncentrality 0.8 at x = 1.
    // The kernel series needs more terms as x grows; the mass beyond 80 is
    // below 1e-10.
    trunc.max_degree = 150;
    const double total = integrate_m1(
        [&](double x) {
          return ncwgd_logpdf(p, SymMatrix::from_entries(Matrix::Constant(1, 1, psi)), SpdMatrix::scalar(1, x), trunc)
              .logpdf;
        },
        0.0, 80.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::isfinite(d.logpdf));
  }

  TEST_CASE("special cases are consistent with their generators") {
    const SpdMatrix sigma = SpdMatrix::identity(2);
    for (const std::string& name : special_case_names()) {
      CAPTURE(name);
      nlohmann::json params = nlohmann::json::object();
      if (name == "matrix_t") params = {{"p", 3.0}};
      if (name == "power_wishart" || name == "kummer_wishart" || name == "logistic_wishart" || name == "sin_wishart")
        params = {{"a", 1.0}, {"b", 1.0}};
      if (name == "hypergeometric_wishart") params = {{"a", {1.5}}, {"b", {2.5, 1.2}}, {"c", 0.5}};
      const SpecialCase sc = special_case(name, sigma, 5.0, params);
      CHECK(sc.log_normalizer == doctest::Approx(wgd_log_normalizer(sc.params)));
    }
    CHECK_THROWS_AS(special_case("unknown", sigma, 5.0, {}), Error);
  }

  TEST_CASE("inverse Wishart density integrates to one at m = 1") {
    const SpdMatrix psi = SpdMatrix::scalar(1, 1.7);
    const double total =
        integrate_m1([&](double u) { return inverse_wishart_logpdf(psi, 5.0, SpdMatrix::scalar(1, u)); }, 0.0,
                     testutil::kInf);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}
