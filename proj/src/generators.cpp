#include "wgd/generators.hpp"

#include "wgd/error.hpp"
#include "wgd/quadrature.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace wgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mutex& registry_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, CustomSpec>& registry() {
  static std::map<std::string, CustomSpec> reg = [] {
    std::map<std::string, CustomSpec> r;
    CustomSpec mix;
    mix.log_h = [](double y) {
      // log((e^{-y/2} + e^{-y}) / 2)
      return -0.5 * y + std::log1p(std::exp(-0.5 * y)) - std::log(2.0);
    };
    mix.decay = {DecayBound::Type::Exponential, 0.5};
    mix.log_mellin = [](double s) {
      double lg = boost::math::lgamma(s);
      return lg + s * std::log(2.0) + std::log1p(std::pow(2.0, -s)) - std::log(2.0);
    };
    r.emplace("gamma_mixture", std::move(mix));
    return r;
  }();
  return reg;
}

CustomSpec lookup(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end()) fail(ErrorKind::InvalidInput, "unknown generator '" + name + "'");
  return it->second;
}

void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorKind::ParameterOutOfRange, msg);
}

double log_factorial(int k) { return boost::math::lgamma(k + 1.0); }

// log pFq(a; b; z) for z >= 0 and positive parameters, where every term is
// positive. Far out the leading asymptotic term is used instead.
double log_pfq_positive(const std::vector<double>& a, const std::vector<double>& b, double z) {
  if (z == 0.0) return 0.0;
  if (z > 1e5) {
    if (a.size() == b.size()) {
      double r = z;
      for (double v : b) r += boost::math::lgamma(v) - v * std::log(z);
      for (double v : a) r += v * std::log(z) - boost::math::lgamma(v);
      return r;
    }
    double order = static_cast<double>(b.size() - a.size() + 1);
    return order * std::pow(z, 1.0 / order);
  }
  const double lz = std::log(z);
  double lt = 0.0, lmax = 0.0, acc = 1.0;  // acc = sum exp(lt - lmax)
  for (int j = 0; j < 4000000; ++j) {
    double ratio = lz - std::log(j + 1.0);
    for (double v : a) ratio += std::log(v + j);
    for (double v : b) ratio -= std::log(v + j);
    lt += ratio;
    if (lt > lmax) {
      acc = acc * std::exp(lmax - lt) + 1.0;
      lmax = lt;
    } else {
      acc += std::exp(lt - lmax);
    }
    if (ratio < 0 && lt < lmax - 40.0) break;
  }
  return lmax + std::log(acc);
}

}  // namespace

void register_generator(const std::string& name, CustomSpec spec) {
  if (!spec.log_h) fail(ErrorKind::InvalidInput, "custom generator needs log_h");
  if (!(spec.support_hi > spec.support_lo) || spec.support_lo < 0)
    fail(ErrorKind::InvalidInput, "custom generator support must be a subinterval of (0, inf)");
  // 1000 grid points, geometric on unbounded supports.
  const double lo = spec.support_lo > 0 ? spec.support_lo : 1e-6;
  const double hi = std::isfinite(spec.support_hi) ? spec.support_hi : lo + 1e6;
  bool all_one = true;
  for (int i = 0; i < 1000; ++i) {
    const double t = (i + 0.5) / 1000.0;
    const double y = std::isfinite(spec.support_hi) ? lo + t * (hi - lo) : lo * std::pow(hi / lo, t);
    const double v = spec.log_h(y);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      fail(ErrorKind::InvalidInput, "custom generator '" + name + "' is not a nonnegative finite function");
    if (v != 0.0) all_one = false;
  }
  if (all_one) fail(ErrorKind::InvalidInput, "custom generator '" + name + "' is identically 1");
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(spec);
}

std::vector<std::string> registered_generators() {
  std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& kv : registry()) out.push_back(kv.first);
  return out;
}

ShapeGenerator ShapeGenerator::exponential() { return ShapeGenerator(); }

ShapeGenerator ShapeGenerator::t_prime(double p, double n, int m) {
  require(p > 0, "t_prime needs p > 0");
  ShapeGenerator g = t_prime_exponent(0.5 * n * m + p);
  g.p_ = p;
  return g;
}

ShapeGenerator ShapeGenerator::t_prime_exponent(double c) {
  require(c > 0, "t_prime exponent must be positive");
  ShapeGenerator g;
  g.kind_ = GeneratorKind::TPrime;
  g.c_ = c;
  return g;
}

ShapeGenerator ShapeGenerator::power(double a, double b) {
  require(a > 0 && b > 0, "power generator needs a > 0 and b > 0");
  ShapeGenerator g;
  g.kind_ = GeneratorKind::Power;
  g.a_ = a;
  g.b_ = b;
  return g;
}

ShapeGenerator ShapeGenerator::kummer(double a, double b, double n, int m) {
  require(a > 0, "kummer generator needs a > 0");
  require(b > 0, "kummer generator needs b > 0");
  ShapeGenerator g;
  g.kind_ = GeneratorKind::Kummer;
  g.a_ = a;
  g.b_ = b;
  g.c_ = 0.5 * (n * m - 1.0);
  return g;
}

ShapeGenerator ShapeGenerator::logistic(double a, double b) {
  require(a > 0 && b > 0, "logistic generator needs a > 0 and b > 0");
  ShapeGenerator g;
  g.kind_ = GeneratorKind::Logistic;
  g.a_ = a;
  g.b_ = b;
  return g;
}

ShapeGenerator ShapeGenerator::sin_gaussian(double a, double b) {
  require(a >= 0 && b > 0, "sin_gaussian generator needs a >= 0 and b > 0");
  ShapeGenerator g;
  g.kind_ = GeneratorKind::SinGaussian;
  g.a_ = a;
  g.b_ = b;
  g.hi_ = boost::math::constants::pi<double>() / b;
  return g;
}

ShapeGenerator ShapeGenerator::log_exp() {
  ShapeGenerator g;
  g.kind_ = GeneratorKind::LogExp;
  g.lo_ = 1.0;
  return g;
}

ShapeGenerator ShapeGenerator::hypergeom_exp(std::vector<double> a, std::vector<double> b, double c) {
  require(a.size() <= b.size(), "hypergeom_exp needs p <= q");
  require(c >= 0, "hypergeom_exp needs c >= 0");
  require(a.size() < b.size() || c < 1.0, "hypergeom_exp with p = q needs c < 1");
  for (double v : a) require(v > 0, "hypergeom_exp upper parameters must be positive");
  for (double v : b) require(v > 0, "hypergeom_exp lower parameters must be positive");
  ShapeGenerator g;
  g.kind_ = GeneratorKind::HypergeomExp;
  g.upper_ = std::move(a);
  g.lower_ = std::move(b);
  g.c_ = c;
  return g;
}

ShapeGenerator ShapeGenerator::custom(const std::string& name) {
  CustomSpec spec = lookup(name);
  ShapeGenerator g;
  g.kind_ = GeneratorKind::Custom;
  g.custom_ = name;
  g.spec_ = std::make_shared<const CustomSpec>(spec);
  g.lo_ = spec.support_lo;
  g.hi_ = spec.support_hi;
  return g;
}

std::string ShapeGenerator::name() const {
  switch (kind_) {
    case GeneratorKind::Exponential: return "exponential";
    case GeneratorKind::TPrime: return "t_prime";
    case GeneratorKind::Power: return "power";
    case GeneratorKind::Kummer: return "kummer";
    case GeneratorKind::Logistic: return "logistic";
    case GeneratorKind::SinGaussian: return "sin_gaussian";
    case GeneratorKind::LogExp: return "log_exp";
    case GeneratorKind::HypergeomExp: return "hypergeom_exp";
    case GeneratorKind::Custom: return custom_;
  }
  return "unknown";
}

namespace {

double num(const nlohmann::json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number())
    fail(ErrorKind::InvalidInput, std::string("generator parameter '") + key + "' missing or not a number");
  return params.at(key).get<double>();
}

std::vector<double> num_list(const nlohmann::json& params, const char* key) {
  if (!params.contains(key)) return {};
  const auto& v = params.at(key);
  if (!v.is_array()) fail(ErrorKind::InvalidInput, std::string("generator parameter '") + key + "' must be a list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(ErrorKind::InvalidInput, std::string("generator parameter '") + key + "' must be numeric");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

ShapeGenerator ShapeGenerator::from_json(const nlohmann::json& j, double n, int m) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(ErrorKind::InvalidInput, "generator must be an object with a string \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  if (kind == "exponential") return exponential();
  if (kind == "t_prime") {
    if (params.contains("c")) return t_prime_exponent(num(params, "c"));
    return t_prime(num(params, "p"), n, m);
  }
  if (kind == "power") return power(num(params, "a"), num(params, "b"));
  if (kind == "kummer") return kummer(num(params, "a"), num(params, "b"), n, m);
  if (kind == "logistic") return logistic(num(params, "a"), num(params, "b"));
  if (kind == "sin_gaussian") return sin_gaussian(num(params, "a"), num(params, "b"));
  if (kind == "log_exp") return log_exp();
  if (kind == "hypergeom_exp") return hypergeom_exp(num_list(params, "a"), num_list(params, "b"), num(params, "c"));
  if (kind == "custom") {
    if (!params.contains("name") || !params.at("name").is_string())
      fail(ErrorKind::InvalidInput, "custom generator needs params.name");
    return custom(params.at("name").get<std::string>());
  }
  return custom(kind);
}

nlohmann::json ShapeGenerator::to_json() const {
  nlohmann::json params = nlohmann::json::object();
  switch (kind_) {
    case GeneratorKind::Exponential:
    case GeneratorKind::LogExp: break;
    case GeneratorKind::TPrime:
      if (p_ > 0) params["p"] = p_;
      params["c"] = c_;
      break;
    case GeneratorKind::Kummer: params["exponent"] = c_; [[fallthrough]];
    case GeneratorKind::Power:
    case GeneratorKind::Logistic:
    case GeneratorKind::SinGaussian:
      params["a"] = a_;
      params["b"] = b_;
      break;
    case GeneratorKind::HypergeomExp:
      params["a"] = upper_;
      params["b"] = lower_;
      params["c"] = c_;
      break;
    case GeneratorKind::Custom: params["name"] = custom_; return {{"kind", "custom"}, {"params", params}};
  }
  return {{"kind", name()}, {"params", params}};
}

double ShapeGenerator::log_pfq(double z) const {
  if (upper_.empty() && lower_.empty()) return z;
  return log_pfq_positive(upper_, lower_, z);
}

double ShapeGenerator::log_h(double y) const {
  if (!in_support(y) && !(y == 0.0 && lo_ == 0.0 && kind_ != GeneratorKind::Logistic)) return -kInf;
  switch (kind_) {
    case GeneratorKind::Exponential: return -0.5 * y;
    case GeneratorKind::TPrime: return -c_ * std::log1p(y);
    case GeneratorKind::Power: return -a_ * std::pow(y, b_);
    case GeneratorKind::Kummer: return -c_ * std::log(a_ + y) - b_ * y;
    case GeneratorKind::Logistic: {
      double e = -std::expm1(-b_ * y);
      return -b_ * y - 2.0 * std::log(e);
    }
    case GeneratorKind::SinGaussian: {
      double s = std::sin(b_ * y);
      return s > 0 ? -a_ * y * y + std::log(s) : -kInf;
    }
    case GeneratorKind::LogExp: return y > 1.0 ? -y + std::log(std::log(y)) : -kInf;
    case GeneratorKind::HypergeomExp: return y > 1e200 ? -kInf : -y + log_pfq(c_ * y);
    case GeneratorKind::Custom: return spec_->log_h(y);
  }
  return -kInf;
}

double ShapeGenerator::operator()(double y) const {
  if (!(y >= lo_ && y <= hi_) || (y == 0.0 && kind_ == GeneratorKind::Logistic)) {
    std::ostringstream os;
    os << name() << " generator evaluated outside its support at y = " << y;
    fail(ErrorKind::NonpositiveDensity, os.str());
  }
  double v = log_h(y);
  return std::exp(v);
}

double h_eval(const ShapeGenerator& h, double y) {
  if (!(y >= 0.0)) {
    std::ostringstream os;
    os << "generator argument must be nonnegative, got " << y;
    fail(ErrorKind::DomainError, os.str());
  }
  return h(y);
}

std::optional<double> ShapeGenerator::max_mellin_argument() const {
  switch (kind_) {
    case GeneratorKind::TPrime: return c_;
    case GeneratorKind::Custom: {
      if (spec_->decay.type == DecayBound::Type::Polynomial) return spec_->decay.rate;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

bool ShapeGenerator::has_analytic_mellin() const {
  switch (kind_) {
    case GeneratorKind::Exponential:
    case GeneratorKind::TPrime:
    case GeneratorKind::Power:
    case GeneratorKind::Logistic:
    case GeneratorKind::HypergeomExp: return true;
    case GeneratorKind::Custom: return static_cast<bool>(spec_->log_mellin);
    default: return false;
  }
}

MellinValue ShapeGenerator::mellin(double s) const {
  std::ostringstream tag;
  tag << name() << " Mellin transform at s = " << s;
  if (!(s > 0)) fail(ErrorKind::DivergentIntegral, tag.str() + " needs s > 0");
  if (auto smax = max_mellin_argument(); smax && !(s < *smax))
    fail(ErrorKind::DivergentIntegral, tag.str() + " does not exist (tail too heavy)");
  if (kind_ == GeneratorKind::Logistic && !(s > 2.0))
    fail(ErrorKind::DivergentIntegral, tag.str() + " diverges at 0 unless s > 2");
  if (!has_analytic_mellin()) return mellin_quadrature(s);

  MellinValue out;
  switch (kind_) {
    case GeneratorKind::Exponential: out.log_value = boost::math::lgamma(s) + s * std::log(2.0); break;
    case GeneratorKind::TPrime: out.log_value = std::log(boost::math::beta(s, c_ - s)); break;
    case GeneratorKind::Power:
      out.log_value = boost::math::lgamma(s / b_) - std::log(b_) - (s / b_) * std::log(a_);
      break;
    case GeneratorKind::Logistic:
      out.log_value = boost::math::lgamma(s) - s * std::log(b_) + std::log(boost::math::zeta(s - 1.0));
      break;
    case GeneratorKind::HypergeomExp: {
      std::vector<double> up = upper_;
      up.insert(up.begin(), s);
      out.log_value = boost::math::lgamma(s) + log_pfq_positive(up, lower_, c_);
      break;
    }
    case GeneratorKind::Custom: out.log_value = spec_->log_mellin(s); break;
    default: break;
  }
  if (kind_ == GeneratorKind::TPrime && !std::isfinite(out.log_value))
    out.log_value = boost::math::lgamma(s) + boost::math::lgamma(c_ - s) - boost::math::lgamma(c_);
  if (!std::isfinite(out.log_value)) fail(ErrorKind::DivergentIntegral, tag.str() + " is not finite");
  return out;
}

MellinValue ShapeGenerator::mellin_quadrature(double s) const {
  std::ostringstream tag;
  tag << name() << " Mellin transform at s = " << s;
  if (auto smax = max_mellin_argument(); smax && !(s < *smax))
    fail(ErrorKind::DivergentIntegral, tag.str() + " does not exist (tail too heavy)");
  auto r = log_integrate_positive([&](double y) { return (s - 1.0) * std::log(y) + log_h(y); }, lo_, hi_, tag.str());
  MellinValue out;
  out.log_value = r.log_value;
  out.rel_error = r.rel_error;
  out.analytic = false;
  return out;
}

bool ShapeGenerator::has_taylor() const {
  switch (kind_) {
    case GeneratorKind::Exponential:
    case GeneratorKind::TPrime:
    case GeneratorKind::HypergeomExp: return true;
    case GeneratorKind::Power: return b_ == std::floor(b_);
    default: return false;
  }
}

std::optional<double> ShapeGenerator::taylor_ratio(int k) const {
  if (k < 0) fail(ErrorKind::InvalidInput, "Taylor order must be non-negative");
  if (!has_taylor()) fail(ErrorKind::NoTaylorExpansion, name() + " generator has no Taylor expansion at 0");
  switch (kind_) {
    case GeneratorKind::Exponential: return std::pow(-0.5, k) * std::exp(-log_factorial(k));
    case GeneratorKind::TPrime: {
      double lr = boost::math::lgamma(c_ + k) - boost::math::lgamma(c_) - log_factorial(k);
      return (k % 2 ? -1.0 : 1.0) * std::exp(lr);
    }
    case GeneratorKind::Power: {
      int b = static_cast<int>(b_);
      if (k % b != 0) return std::nullopt;
      int j = k / b;
      return (j % 2 ? -1.0 : 1.0) * std::exp(j * std::log(a_) - log_factorial(j));
    }
    case GeneratorKind::HypergeomExp: {
      double sum = 0.0;
      double t = 1.0;  // (a)_j / (b)_j c^j / j!
      for (int j = 0; j <= k; ++j) {
        if (j > 0) {
          for (double v : upper_) t *= v + j - 1;
          for (double v : lower_) t /= v + j - 1;
          t *= c_ / j;
        }
        sum += t * ((k - j) % 2 ? -1.0 : 1.0) * std::exp(-log_factorial(k - j));
      }
      return sum;
    }
    default: break;
  }
  fail(ErrorKind::NoTaylorExpansion, name() + " generator has no Taylor expansion at 0");
}

double ShapeGenerator::taylor_coeff(int k) const {
  auto r = taylor_ratio(k);
  return r ? *r * std::exp(log_factorial(k)) : 0.0;
}

double ShapeGenerator::g_prime(double y) const {
  if (!in_support(y)) {
    std::ostringstream os;
    os << name() << " generator derivative requested where h is not positive, y = " << y;
    fail(ErrorKind::DomainError, os.str());
  }
  switch (kind_) {
    case GeneratorKind::Exponential: return 0.5;
    case GeneratorKind::TPrime: return c_ / (1.0 + y);
    case GeneratorKind::Power: return a_ * b_ * std::pow(y, b_ - 1.0);
    case GeneratorKind::Kummer: return c_ / (a_ + y) + b_;
    case GeneratorKind::Logistic: return b_ / std::tanh(0.5 * b_ * y);
    case GeneratorKind::SinGaussian: return 2.0 * a_ * y - b_ / std::tan(b_ * y);
    case GeneratorKind::LogExp: return 1.0 - 1.0 / (y * std::log(y));
    case GeneratorKind::HypergeomExp: {
      if (upper_.empty() && lower_.empty()) return 1.0 - c_;
      double ratio = c_;
      std::vector<double> up = upper_, low = lower_;
      for (double& v : up) {
        ratio *= v;
        v += 1.0;
      }
      for (double& v : low) {
        ratio /= v;
        v += 1.0;
      }
      return 1.0 - ratio * std::exp(log_pfq_positive(up, low, c_ * y) - log_pfq(c_ * y));
    }
    case GeneratorKind::Custom: {
      double step = 1e-6 * std::max(1.0, y);
      double lo = std::max(y - step, 0.5 * (y + lo_));
      double hi = std::min(y + step, 0.5 * (y + hi_));
      return -(log_h(hi) - log_h(lo)) / (hi - lo);
    }
  }
  return 0.0;
}

double gamma_k_ln(const ShapeGenerator& h, double a, int k, int m) { return h.log_mellin(a * m + k); }

double radial_logpdf(const ShapeGenerator& h, double n, int m, double y) {
  const double s = 0.5 * n * m;
  if (!(y > 0)) return -kInf;
  return (s - 1.0) * std::log(y) + h.log_h(y) - h.log_mellin(s);
}

}  // namespace wgd
