#include "wgd/distributions.hpp"

#include "wgd/error.hpp"
#include "wgd/quadrature.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>

namespace wgd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SpecialCase finish(std::string name, WgdParams params, double printed) {
  SpecialCase sc{std::move(name), std::move(params)};
  sc.log_normalizer = wgd_log_normalizer(sc.params);
  sc.printed_log_normalizer = printed;
  if (std::isnan(printed)) {
    sc.relative_mismatch = kNaN;
    sc.mismatch = true;
    sc.note = "closed-form constant is not a positive number for these parameters";
    return sc;
  }
  sc.relative_mismatch = std::abs(std::expm1(printed - sc.log_normalizer));
  sc.mismatch = !(sc.relative_mismatch <= 1e-6);
  if (sc.mismatch && std::abs(std::expm1(printed + sc.params.log_gamma0())) <= 1e-6)
    sc.note = "closed-form constant equals 1/gamma_0(n/2); the factor Gamma(nm/2)/Gamma_m(n/2) is missing";
  return sc;
}

double s_of(const SpdMatrix& sigma, double n) { return 0.5 * n * sigma.dim(); }

// D_nu(z) for nu < 0 from its Laplace-type integral representation.
double log_parabolic_cylinder_d(double nu, double z) {
  auto r = log_integrate_positive([&](double t) { return (-nu - 1.0) * std::log(t) - z * t - 0.5 * t * t; }, 0.0,
                                  std::numeric_limits<double>::infinity(), "parabolic cylinder integral");
  return -0.25 * z * z - boost::math::lgamma(-nu) + r.log_value;
}

}  // namespace

SpecialCase matrix_t_case(const SpdMatrix& sigma, double n, double p) {
  if (!(p > 0)) fail(ErrorKind::ParameterOutOfRange, "matrix t needs p > 0");
  const int m = sigma.dim();
  WgdParams params(sigma, n, ShapeGenerator::t_prime(p, n, m));
  double printed = boost::math::lgamma(s_of(sigma, n) + p) - mv_gamma_ln(0.5 * n, m) - boost::math::lgamma(p);
  return finish("matrix_t", std::move(params), printed);
}

SpecialCase power_wishart_case(const SpdMatrix& sigma, double n, double a, double b) {
  if (!(a > 0 && b > 0)) fail(ErrorKind::ParameterOutOfRange, "power Wishart needs a > 0 and b > 0");
  const double s = s_of(sigma, n);
  WgdParams params(sigma, n, ShapeGenerator::power(a, b));
  double printed = std::log(b) + (s / b) * std::log(a) - boost::math::lgamma(s / b);
  return finish("power_wishart", std::move(params), printed);
}

SpecialCase kummer_wishart_case(const SpdMatrix& sigma, double n, double a, double b) {
  if (!(a > 0 && b > 0)) fail(ErrorKind::ParameterOutOfRange, "Kummer-type case needs a > 0 and b > 0");
  const int m = sigma.dim();
  const double s = s_of(sigma, n);
  WgdParams params(sigma, n, ShapeGenerator::kummer(a, b, n, m));
  double printed = 0.5 * (1.0 - n * m) * std::log(2.0) + 0.5 * std::log(b) - boost::math::lgamma(s) - 0.5 * a * b -
                   log_parabolic_cylinder_d(1.0 - n * m, std::sqrt(2.0 * a * b));
  return finish("kummer_wishart", std::move(params), printed);
}

SpecialCase logistic_wishart_case(const SpdMatrix& sigma, double n, double a, double b) {
  if (!(a > 0 && b > 0)) fail(ErrorKind::ParameterOutOfRange, "logistic-type case needs a > 0 and b > 0");
  const double s = s_of(sigma, n);
  WgdParams params(sigma, n, ShapeGenerator::logistic(a, b));
  double printed = kNaN;
  double c = kNaN;
  if (a == 1.0 && s > 2.0) {
    c = boost::math::zeta(s - 1.0);
  } else if (a < 1.0) {
    c = 0.0;
    for (int i = 1; i < 10000000; ++i) {
      double term = std::exp(i * std::log(a) + (1.0 - s) * std::log(static_cast<double>(i)));
      c += term;
      if (term < 1e-17 * c) break;
    }
  }
  if (c > 0) printed = std::log(a) + s * std::log(b) - std::log(c) - boost::math::lgamma(s);
  return finish("logistic_wishart", std::move(params), printed);
}

SpecialCase sin_wishart_case(const SpdMatrix& sigma, double n, double a, double b) {
  if (!(a > 0 && b > 0)) fail(ErrorKind::ParameterOutOfRange, "sin-Wishart needs a > 0 and b > 0");
  const double s = s_of(sigma, n);
  WgdParams params(sigma, n, ShapeGenerator::sin_gaussian(a, b));
  const double z = b * b / (4.0 * a);
  double f11 = boost::math::hypergeometric_1F1(1.0 - 0.5 * s, 1.5, z);
  double printed = kNaN;
  if (f11 > 0)
    printed = std::log(2.0) + 0.5 * (s + 1.0) * std::log(a) + z - std::log(b) -
              boost::math::lgamma(0.5 * (s + 1.0)) - std::log(f11);
  SpecialCase sc = finish("sin_wishart", std::move(params), printed);
  if (sc.mismatch && sc.note.empty())
    sc.note = "closed form integrates over (0, inf), where sin(b y) changes sign; the density uses (0, pi/b)";
  return sc;
}

SpecialCase log_wishart_case(const SpdMatrix& sigma, double n) {
  const double s = s_of(sigma, n);
  WgdParams params(sigma, n, ShapeGenerator::log_exp());
  double dg = boost::math::digamma(s);
  double printed = dg > 0 ? -(boost::math::lgamma(s) + std::log(dg)) : kNaN;
  SpecialCase sc = finish("log_wishart", std::move(params), printed);
  if (sc.mismatch && sc.note.empty())
    sc.note = "closed form integrates exp(-y) log y over (0, inf), where it is negative below 1; the density uses (1, inf)";
  return sc;
}

SpecialCase hypergeometric_wishart_case(const SpdMatrix& sigma, double n, const std::vector<double>& a,
                                        const std::vector<double>& b, double c) {
  if (!(a.size() < b.size())) fail(ErrorKind::ParameterOutOfRange, "hypergeometric Wishart needs p < q");
  const double s = s_of(sigma, n);
  WgdParams params(sigma, n, ShapeGenerator::hypergeom_exp(a, b, c));
  // The printed constant is 1 / (Gamma(nm/2) p+1Fq(nm/2, a; b; c)) = 1 / gamma_0.
  double printed = -(params.h().mellin(s).log_value);
  return finish("hypergeometric_wishart", std::move(params), printed);
}

namespace {

double param(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    fail(ErrorKind::InvalidInput, std::string("special case parameter '") + key + "' missing or not a number");
  return j.at(key).get<double>();
}

std::vector<double> param_list(const nlohmann::json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) fail(ErrorKind::InvalidInput, std::string("special case parameter '") + key + "' must be a list");
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

}  // namespace

std::vector<std::string> special_case_names() {
  return {"matrix_t", "power_wishart", "kummer_wishart", "logistic_wishart", "sin_wishart", "log_wishart",
          "hypergeometric_wishart"};
}

SpecialCase special_case(const std::string& name, const SpdMatrix& sigma, double n, const nlohmann::json& params) {
  if (name == "matrix_t") return matrix_t_case(sigma, n, param(params, "p"));
  if (name == "power_wishart") return power_wishart_case(sigma, n, param(params, "a"), param(params, "b"));
  if (name == "kummer_wishart") return kummer_wishart_case(sigma, n, param(params, "a"), param(params, "b"));
  if (name == "logistic_wishart") return logistic_wishart_case(sigma, n, param(params, "a"), param(params, "b"));
  if (name == "sin_wishart") return sin_wishart_case(sigma, n, param(params, "a"), param(params, "b"));
  if (name == "log_wishart") return log_wishart_case(sigma, n);
  if (name == "hypergeometric_wishart")
    return hypergeometric_wishart_case(sigma, n, param_list(params, "a"), param_list(params, "b"), param(params, "c"));
  fail(ErrorKind::InvalidInput, "unknown special case '" + name + "'");
}

}  // namespace wgd
