#include "test_util.hpp"
#include "wgd/error.hpp"
#include "wgd/generators.hpp"

#include <doctest.h>

#include <boost/math/special_functions/factorials.hpp>

using namespace wgd;
using testutil::kInf;

namespace {

double mellin_by_quad(const ShapeGenerator& h, double s) {
  auto f = [&](double y) {
    const double lh = h.log_h(y);
    return std::isfinite(lh) ? std::exp((s - 1) * std::log(y) + lh) : 0.0;
  };
  const double lo = h.support_lo(), hi = h.support_hi();
  const double mid = std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 1.0;
  return testutil::quad(f, lo, mid) + testutil::quad(f, mid, hi);
}

std::vector<ShapeGenerator> builtins() {
  return {ShapeGenerator::exponential(),       ShapeGenerator::t_prime(3.0, 3.0, 2),
          ShapeGenerator::power(1.2, 0.8),      ShapeGenerator::kummer(1.0, 0.5, 3.0, 2),
          ShapeGenerator::logistic(1.0, 1.5),   ShapeGenerator::sin_gaussian(0.7, 1.1),
          ShapeGenerator::log_exp(),            ShapeGenerator::hypergeom_exp({1.5}, {2.5}, 0.5),
          ShapeGenerator::custom("gamma_mixture")};
}

}  // namespace

TEST_SUITE("generators") {
  TEST_CASE("exponential and t_prime Mellin transforms in closed form") {
    const ShapeGenerator e = ShapeGenerator::exponential();
    for (double s : {0.5, 1.0, 3.0, 7.5}) CHECK(e.log_mellin(s) == doctest::Approx(std::lgamma(s) + s * std::log(2.0)));
    const ShapeGenerator t = ShapeGenerator::t_prime_exponent(5.0);
    for (double s : {0.5, 1.0, 3.0, 4.5})
      CHECK(t.log_mellin(s) == doctest::Approx(std::lgamma(s) + std::lgamma(5.0 - s) - std::lgamma(5.0)));
    CHECK_THROWS_AS(t.log_mellin(5.0), Error);
  }

  TEST_CASE("Mellin transforms agree with direct quadrature for every kind") {
    for (const ShapeGenerator& h : builtins()) {
      CAPTURE(h.name());
      for (double s : {2.5, 4.0}) {
        const double q = mellin_by_quad(h, s);
        CHECK(std::exp(h.log_mellin(s)) == doctest::Approx(q).epsilon(1e-8));
        CHECK(std::exp(h.mellin_quadrature(s).log_value) == doctest::Approx(q).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("gamma_k is the Mellin transform at a m + k") {
    const ShapeGenerator h = ShapeGenerator::power(1.0, 2.0);
    CHECK(gamma_k_ln(h, 1.5, 2, 2) == doctest::Approx(h.log_mellin(5.0)));
  }

  TEST_CASE("Taylor coefficients") {
    const ShapeGenerator e = ShapeGenerator::exponential();
    for (int k = 0; k < 10; ++k)
      CHECK(*e.taylor_ratio(k) ==
            doctest::Approx(std::pow(-0.5, k) / boost::math::factorial<double>(k)).epsilon(1e-13));
    const ShapeGenerator t = ShapeGenerator::t_prime_exponent(2.5);
    double binom = 1.0;
    for (int k = 0; k < 10; ++k) {
      CHECK(*t.taylor_ratio(k) == doctest::Approx(binom).epsilon(1e-12));
      binom *= -(2.5 + k) / (k + 1.0);
    }
    const ShapeGenerator p = ShapeGenerator::power(1.0, 2.0);
    CHECK_FALSE(p.taylor_ratio(1).has_value());
    CHECK(*p.taylor_ratio(2) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(ShapeGenerator::log_exp().taylor_ratio(1), Error);
  }

  TEST_CASE("log derivative against finite differences") {
    for (const ShapeGenerator& h : builtins()) {
      CAPTURE(h.name());
      const double lo = h.support_lo(), hi = h.support_hi();
      const double y = std::isfinite(hi) ? lo + 0.37 * (hi - lo) : lo + 1.3;
      const double d = 1e-5;
      const double fd = -(h.log_h(y + d) - h.log_h(y - d)) / (2 * d);
      CHECK(h.g_prime(y) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK_THROWS_AS(ShapeGenerator::log_exp().g_prime(0.5), Error);
  }

  TEST_CASE("support and evaluation") {
    const ShapeGenerator s = ShapeGenerator::sin_gaussian(1.0, 2.0);
    CHECK(s.support_hi() == doctest::Approx(testutil::kPi / 2.0));
    CHECK(s.log_h(2.0) == -kInf);
    CHECK(h_eval(s, 0.5) == doctest::Approx(std::exp(-0.25) * std::sin(1.0)));
    CHECK_THROWS_AS(h_eval(s, -1.0), Error);
  }

  TEST_CASE("JSON round trip and validation") {
    for (const ShapeGenerator& h : builtins()) {
      CAPTURE(h.name());
      const ShapeGenerator g = ShapeGenerator::from_json(h.to_json(), 3.0, 2);
      CHECK(g.kind() == h.kind());
      CHECK(g.log_h(1.7) == doctest::Approx(h.log_h(1.7)));
    }
    using nlohmann::json;
    CHECK_THROWS_AS(ShapeGenerator::from_json(json{{"kind", "nope"}}, 3.0, 2), Error);
    CHECK_THROWS_AS(ShapeGenerator::from_json(json{{"kind", "t_prime"}, {"params", {{"p", -1.0}}}}, 3.0, 2), Error);
    CHECK_THROWS_AS(ShapeGenerator::custom("not_registered"), Error);
  }

  TEST_CASE("custom registry") {
    CustomSpec spec;
    spec.log_h = [](double y) { return -y * y; };
    spec.decay = {DecayBound::Type::Exponential, 1.0};
    register_generator("half_gaussian_test", spec);
    const ShapeGenerator h = ShapeGenerator::custom("half_gaussian_test");
    // int y^{s-1} exp(-y^2) dy = Gamma(s/2) / 2
    CHECK(h.log_mellin(3.0) == doctest::Approx(std::lgamma(1.5) - std::log(2.0)).epsilon(1e-9));
    CustomSpec bad;
    bad.log_h = [](double) { return std::nan(""); };
    CHECK_THROWS_AS(register_generator("bad_test", bad), Error);
  }

  TEST_CASE("radial density integrates to one") {
    for (const ShapeGenerator& h : builtins()) {
      CAPTURE(h.name());
      auto f = [&](double y) {
        const double v = radial_logpdf(h, 3.0, 2, y);
        return std::isfinite(v) ? std::exp(v) : 0.0;
      };
      const double lo = h.support_lo(), hi = h.support_hi();
      const double mid = std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 3.0;
      CHECK(testutil::quad(f, lo, mid) + testutil::quad(f, mid, hi) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}
