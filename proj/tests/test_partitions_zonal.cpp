#include "test_util.hpp"
#include "wgd/error.hpp"
#include "wgd/partitions_zonal.hpp"

#include <doctest.h>

#include <numeric>

using namespace wgd;

namespace {

double sum_layer(int k, const Vector& ev) {
  const auto c = zonal_layer(k, std::span<const double>(ev.data(), static_cast<size_t>(ev.size())));
  return std::accumulate(c.begin(), c.end(), 0.0);
}

double zonal_of(const Partition& k, const std::vector<double>& y) { return zonal(k, std::span<const double>(y)); }

}  // namespace

TEST_SUITE("partitions_zonal") {
  TEST_CASE("partition counts") {
    const int unrestricted[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int k = 0; k <= 10; ++k) CHECK(partitions_of(k, 20).size() == static_cast<size_t>(unrestricted[k]));
    for (int k = 0; k <= 10; ++k) CHECK(partitions_of(k, 2).size() == static_cast<size_t>(k / 2 + 1));
    const auto p4 = partitions_of(4, 4);
    CHECK(p4.front() == Partition({4}));
    CHECK(p4[1] == Partition({3, 1}));
    CHECK(p4.back() == Partition({1, 1, 1, 1}));
  }

  TEST_CASE("partition parsing and validation") {
    CHECK(Partition::parse("3,1,1") == Partition({3, 1, 1}));
    CHECK(Partition({2, 1, 0}).length() == 2);
    CHECK(Partition({2, 1}).weight() == 3);
    CHECK_THROWS_AS(Partition({1, 2}), Error);
    CHECK_THROWS_AS(Partition::parse("a,b"), Error);
  }

  TEST_CASE("generalized Pochhammer") {
    // m = 1 reduces to the rising factorial.
    CHECK(gen_pochhammer(2.5, Partition({3})) == doctest::Approx(2.5 * 3.5 * 4.5));
    // (a)_{(2,1)} = a (a+1) (a - 1/2)
    CHECK(gen_pochhammer(1.7, Partition({2, 1})) == doctest::Approx(1.7 * 2.7 * 1.2));
    CHECK(gen_pochhammer(3.0, Partition{}) == 1.0);
    const Partition k({3, 2});
    CHECK(gamma_m_partition_ln(2.4, k, 2) ==
          doctest::Approx(testutil::mvgamma_ln(2.4, 2) + std::log(gen_pochhammer(2.4, k))).epsilon(1e-12));
  }

  TEST_CASE("degree-two zonal polynomials in closed form") {
    const std::vector<double> y = {0.7, -0.4, 1.3};
    double e2 = 0.0, p2 = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
      p2 += y[i] * y[i];
      for (size_t j = i + 1; j < y.size(); ++j) e2 += y[i] * y[j];
    }
    CHECK(zonal_of(Partition({2}), y) == doctest::Approx(p2 + 2.0 / 3.0 * e2).epsilon(1e-13));
    CHECK(zonal_of(Partition({1, 1}), y) == doctest::Approx(4.0 / 3.0 * e2).epsilon(1e-13));
    CHECK(zonal_of(Partition({2, 1, 1, 1}), y) == 0.0);
  }

  TEST_CASE("one-dimensional zonal polynomials are powers") {
    for (int k = 0; k <= 12; ++k) CHECK(zonal_of(Partition({k}), {1.3}) == doctest::Approx(std::pow(1.3, k)));
  }

  TEST_CASE("property: layer sums equal powers of the trace") {
    RngStream rng(7, 0);
    for (int t = 0; t < 200; ++t) {
      const int m = 1 + t % 5;
      const Vector ev = sym_eigenvalues(testutil::random_symmetric(m, rng));
      const double scale = ev.cwiseAbs().sum();
      for (int k = 1; k <= 7; ++k)
        CHECK(std::abs(sum_layer(k, ev) - std::pow(ev.sum(), k)) <= 1e-10 * std::pow(scale, k));
    }
  }

  TEST_CASE("property: zonal polynomials are homogeneous and symmetric") {
    RngStream rng(8, 0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> y = {rng.normal(), rng.normal(), rng.normal()};
      const double c = 0.5 + rng.uniform();
      std::vector<double> cy = {c * y[0], c * y[1], c * y[2]};
      std::vector<double> perm = {y[2], y[0], y[1]};
      for (const Partition& k : partitions_of(4, 3)) {
        const double v = zonal_of(k, y);
        CHECK(zonal_of(k, cy) == doctest::Approx(std::pow(c, 4) * v).epsilon(1e-10).scale(1.0));
        CHECK(zonal_of(k, perm) == doctest::Approx(v).epsilon(1e-10).scale(1.0));
      }
    }
  }

  TEST_CASE("zonal at the identity") {
    // C_kappa(I_m) from the hook-length style product formula.
    auto oracle = [](const Partition& k, int m) {
      const int w = k.weight();
      double num = std::lgamma(w + 1.0) + w * std::log(2.0);
      double prod = 0.0;
      for (int i = 0; i < k.length(); ++i)
        for (int j = i + 1; j < k.length(); ++j) prod += std::log(2.0 * k[i] - 2.0 * k[j] - i + j);
      double den = 0.0;
      for (int i = 0; i < k.length(); ++i) den += std::lgamma(2.0 * k[i] + k.length() - i);
      double dk = std::exp(num + prod - den) * std::exp(0.0);
      double poch = 1.0;
      for (int i = 0; i < k.length(); ++i)
        for (int j = 0; j < k[i]; ++j) poch *= 0.5 * m - 0.5 * i + j;
      return dk * std::pow(2.0, w) * poch;
    };
    for (int m = 1; m <= 4; ++m)
      for (int w = 1; w <= 6; ++w)
        for (const Partition& k : partitions_of(w, m)) {
          const std::vector<double> ones(m, 1.0);
          CHECK(zonal_identity(k, m) == doctest::Approx(zonal_of(k, ones)).epsilon(1e-11));
          CHECK(zonal_identity(k, m) == doctest::Approx(oracle(k, m)).epsilon(1e-10));
        }
  }

  TEST_CASE("hypergeometric functions with closed forms") {
    RngStream rng(9, 0);
    Truncation trunc;
    trunc.max_degree = 60;
    trunc.tolerance = 1e-14;
    for (int t = 0; t < 10; ++t) {
      const int m = 1 + t % 3;
      Matrix y = testutil::random_symmetric(m, rng);
      y *= 0.4 / sym_eigenvalues(y).cwiseAbs().maxCoeff();
      const SymMatrix ys = SymMatrix::from_entries(y);
      const Vector ev = sym_eigenvalues(y);
      const SeriesValue e = hypergeom_matrix({}, {}, ys, trunc);
      CHECK(e.real() == doctest::Approx(std::exp(ev.sum())).epsilon(1e-12));
      CHECK(e.converged);
      // 1F0(a; Y) = det(I - Y)^{-a}
      const double a = 1.7;
      const SeriesValue f = hypergeom_matrix({a}, {}, ys, trunc);
      CHECK(f.real() == doctest::Approx(std::pow((Matrix::Identity(m, m) - y).determinant(), -a)).epsilon(1e-10));
    }
  }

  TEST_CASE("truncation limit is reported") {
    Truncation trunc;
    trunc.max_degree = 3;
    const std::vector<double> ev = {5.0, 4.0};
    CHECK_THROWS_AS(hypergeom_matrix({}, {}, std::span<const double>(ev), trunc), Error);
  }
}
