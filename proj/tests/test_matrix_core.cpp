#include "test_util.hpp"
#include "wgd/error.hpp"
#include "wgd/matrix_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace wgd;
using testutil::random_spd;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_SUITE("matrix_core") {
  TEST_CASE("construction rejects asymmetric and indefinite input") {
    Matrix a(2, 2);
    a << 1.0, 0.5, 0.4, 1.0;
    CHECK(kind_of([&] { SpdMatrix::from_entries(a); }) == ErrorKind::NotSymmetric);
    a << 1.0, 2.0, 2.0, 1.0;
    CHECK(kind_of([&] { SpdMatrix::from_entries(a); }) == ErrorKind::NotPositiveDefinite);
    CHECK(kind_of([&] { SpdMatrix::from_entries(Matrix(2, 3)); }) == ErrorKind::DimensionMismatch);
  }

  TEST_CASE("symmetric part is stored within tolerance") {
    Matrix a(2, 2);
    a << 2.0, 0.3, 0.3 + 1e-13, 1.0;
    const SpdMatrix s = SpdMatrix::from_entries(a);
    CHECK(s(0, 1) == s(1, 0));
  }

  TEST_CASE("sqrt_spd squares back for random matrices") {
    RngStream rng(1, 0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const SpdMatrix a = random_spd(1 + t % 5, rng);
      const Matrix r = sqrt_spd_matrix(a);
      worst = std::max(worst, (r * r - a.matrix()).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("log determinant, inverse and eigenvalues agree with Eigen") {
    RngStream rng(2, 0);
    for (int t = 0; t < 50; ++t) {
      const SpdMatrix a = random_spd(1 + t % 4, rng);
      CHECK(a.log_det() == doctest::Approx(std::log(a.matrix().determinant())).epsilon(1e-12));
      CHECK((a.inverse() * a.matrix() - Matrix::Identity(a.dim(), a.dim())).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(a.lambda_max() >= a.lambda_min());
      CHECK(a.eigenvalues().sum() == doctest::Approx(a.trace()).epsilon(1e-12));
      CHECK(a.trace_inverse_times(a.matrix()) == doctest::Approx(a.dim()).epsilon(1e-12));
    }
  }

  TEST_CASE("congruence and product eigenvalues") {
    RngStream rng(3, 0);
    const SpdMatrix s = random_spd(3, rng);
    const Matrix a = testutil::random_matrix(3, rng) + 3.0 * Matrix::Identity(3, 3);
    const SpdMatrix c = s.congruence(a);
    CHECK((c.matrix() - a * s.matrix() * a.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    const Matrix t = testutil::random_symmetric(3, rng);
    const Vector ev = product_eigenvalues(t, s);
    CHECK(ev.sum() == doctest::Approx((t * s.matrix()).trace()).epsilon(1e-10));
  }

  TEST_CASE("multivariate gamma") {
    for (double a : {0.6, 1.0, 2.5, 10.0}) CHECK(mv_gamma_ln(a, 1) == doctest::Approx(std::lgamma(a)).epsilon(1e-12));
    for (int m = 2; m <= 5; ++m)
      CHECK(mv_gamma_ln(m + 0.7, m) == doctest::Approx(testutil::mvgamma_ln(m + 0.7, m)).epsilon(1e-12));
    CHECK_THROWS_AS(mv_gamma_ln(0.4, 2), Error);
  }

  TEST_CASE("multivariate beta at m = 1 against quadrature") {
    for (auto [a, b] : {std::pair{0.7, 1.3}, {2.0, 3.5}, {4.5, 0.9}}) {
      const double q = testutil::quad([&](double x) { return std::pow(x, a - 1) * std::pow(1 - x, b - 1); }, 0, 1);
      CHECK(std::exp(mv_beta_ln(a, b, 1)) == doctest::Approx(q).epsilon(1e-8));
    }
  }

  TEST_CASE("matrix files in JSON and CSV") {
    const std::string jpath = "matrix_io_test.json", cpath = "matrix_io_test.csv";
    {
      std::ofstream(jpath) << R"({"m": 2, "rows": [[2, 0.5], [0.5, 1]]})";
      std::ofstream(cpath) << "2,0.5\n0.5,1\n";
    }
    const Matrix a = read_matrix_file(jpath), b = read_matrix_file(cpath);
    CHECK(a.rows() == 2);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(matrix_from_json(matrix_to_json(a)) == a);
    std::remove(jpath.c_str());
    std::remove(cpath.c_str());
    CHECK(kind_of([] { parse_csv_matrix("1,2\n3\n"); }) == ErrorKind::DimensionMismatch);
    CHECK(kind_of([] { parse_csv_matrix("1,x\n3,4\n"); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { matrix_from_json(nlohmann::json::parse(R"({"m": 3, "rows": [[1]]})")); }) ==
          ErrorKind::DimensionMismatch);
    CHECK(kind_of([] { matrix_from_json(nlohmann::json::parse(R"({"rows": [["a"]]})")); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { read_matrix_file("/nonexistent/file.json"); }) == ErrorKind::InvalidInput);
  }
}
