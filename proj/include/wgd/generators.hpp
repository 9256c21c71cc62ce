#pragma once

#include <json.hpp>

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wgd {

enum class GeneratorKind { Exponential, TPrime, Power, Kummer, Logistic, SinGaussian, LogExp, HypergeomExp, Custom };

// Tail behaviour used to decide in advance whether a Mellin integral exists:
// h(y) <= C exp(-rate y) or h(y) <= C y^{-rate} for large y.
struct DecayBound {
  enum class Type { Exponential, Polynomial };
  Type type = Type::Exponential;
  double rate = 0.0;
};

struct CustomSpec {
  std::function<double(double)> log_h;
  DecayBound decay;
  double support_lo = 0.0;
  double support_hi = std::numeric_limits<double>::infinity();
  // Optional closed form of log int y^{s-1} h(y) dy.
  std::function<double(double)> log_mellin;
};

// Registry for user generators, looked up by name. "gamma_mixture"
// (h = (exp(-y/2) + exp(-y)) / 2) is registered by default.
void register_generator(const std::string& name, CustomSpec spec);
std::vector<std::string> registered_generators();

struct MellinValue {
  double log_value = 0.0;
  double rel_error = 0.0;
  bool analytic = true;
};

// A density generator h: (0, inf) -> [0, inf) with its Mellin transform,
// Taylor coefficients at 0 and log-derivative. Cheap to copy.
class ShapeGenerator {
 public:
  static ShapeGenerator exponential();                        // exp(-y/2)
  static ShapeGenerator t_prime(double p, double n, int m);    // (1+y)^{-(nm/2+p)}
  static ShapeGenerator t_prime_exponent(double c);            // (1+y)^{-c}
  static ShapeGenerator power(double a, double b);             // exp(-a y^b)
  static ShapeGenerator kummer(double a, double b, double n, int m);  // (a+y)^{-(nm-1)/2} exp(-b y)
  static ShapeGenerator logistic(double a, double b);          // exp(-b y) (1 - exp(-b y))^{-2}
  static ShapeGenerator sin_gaussian(double a, double b);      // exp(-a y^2) sin(b y) on (0, pi/b)
  static ShapeGenerator log_exp();                             // exp(-y) log y on (1, inf)
  static ShapeGenerator hypergeom_exp(std::vector<double> a, std::vector<double> b, double c);  // exp(-y) pFq(a;b;c y)
  static ShapeGenerator custom(const std::string& name);

  // {"kind": "t_prime", "params": {"p": 2}}; n and m bind the kinds whose
  // exponent depends on the dimension.
  static ShapeGenerator from_json(const nlohmann::json& j, double n, int m);
  nlohmann::json to_json() const;

  GeneratorKind kind() const { return kind_; }
  std::string name() const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  bool in_support(double y) const { return y > lo_ && y < hi_; }

  // log h(y); -inf where h vanishes, including outside the support.
  double log_h(double y) const;
  // h(y); NonpositiveDensity outside the support.
  double operator()(double y) const;

  // log int_0^inf y^{s-1} h(y) dy. DivergentIntegral when it does not exist.
  double log_mellin(double s) const { return mellin(s).log_value; }
  MellinValue mellin(double s) const;
  MellinValue mellin_quadrature(double s) const;
  bool has_analytic_mellin() const;

  bool has_taylor() const;
  // h^{(k)}(0) / k!; std::nullopt when that coefficient vanishes identically.
  // NoTaylorExpansion for generators that are not analytic at 0.
  std::optional<double> taylor_ratio(int k) const;
  // h^{(k)}(0)
  double taylor_coeff(int k) const;

  // g'(y) = -d/dy log h(y)
  double g_prime(double y) const;

  // Parameters as stored: a/b for two-parameter kinds, c for t_prime.
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::string& custom_name() const { return custom_; }

 private:
  ShapeGenerator() = default;
  double log_pfq(double z) const;
  std::optional<double> max_mellin_argument() const;

  GeneratorKind kind_ = GeneratorKind::Exponential;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0, p_ = 0.0;
  std::vector<double> upper_, lower_;
  std::string custom_;
  std::shared_ptr<const CustomSpec> spec_;
  double lo_ = 0.0;
  double hi_ = std::numeric_limits<double>::infinity();
};

// log gamma_k(a) = log int y^{am+k-1} h(y) dy
double gamma_k_ln(const ShapeGenerator& h, double a, int k, int m);
double h_eval(const ShapeGenerator& h, double y);
// Density of tr(Sigma^{-1} X) for X ~ WGD(Sigma, n, h) in dimension m.
double radial_logpdf(const ShapeGenerator& h, double n, int m, double y);

}  // namespace wgd
