#pragma once

#include "wgd/generators.hpp"
#include "wgd/matrix_core.hpp"
#include "wgd/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wgd {

enum class Formula { Corrected, AsPrinted };

// X ~ WGD(Sigma, n, h): density k |Sigma|^{-n/2} |X|^{n/2-(m+1)/2} h(tr Sigma^{-1} X).
class WgdParams {
 public:
  // Validates n > m - 1 and that gamma_0 = int y^{nm/2-1} h(y) dy is finite.
  WgdParams(SpdMatrix sigma, double n, ShapeGenerator h);

  const SpdMatrix& sigma() const { return sigma_; }
  double n() const { return n_; }
  const ShapeGenerator& h() const { return h_; }
  int dim() const { return sigma_.dim(); }
  double nm_half() const { return 0.5 * n_ * dim(); }
  // log int y^{nm/2-1} h(y) dy
  double log_gamma0() const { return log_gamma0_; }
  bool gamma0_analytic() const { return gamma0_analytic_; }

 private:
  SpdMatrix sigma_;
  double n_;
  ShapeGenerator h_;
  double log_gamma0_ = 0.0;
  bool gamma0_analytic_ = true;
};

// log k_{n,m} = log Gamma(nm/2) - log Gamma_m(n/2) - log gamma_0(n/2)
double wgd_log_normalizer(const WgdParams& p);
double wgd_logpdf(const WgdParams& p, const SpdMatrix& x);
// Density of Y = X^{-1}.
double iwgd_logpdf(const WgdParams& p, const SpdMatrix& y);

// Z with density proportional to |Z|^{alpha-(m+1)/2} h(2 beta tr Sigma^{-1} Z).
struct GgdParams {
  SpdMatrix sigma;
  double alpha;
  double beta;
  ShapeGenerator h;
};
// The corrected constant carries (2 beta)^{m alpha}; AsPrinted omits it.
double ggd_log_normalizer(const GgdParams& p, Formula f = Formula::Corrected);
double ggd_logpdf(const GgdParams& p, const SpdMatrix& z, Formula f = Formula::Corrected);
double iggd_logpdf(const GgdParams& p, const SpdMatrix& y, Formula f = Formula::Corrected);

struct SeriesLogDensity {
  double logpdf = 0.0;
  SeriesValue normalizer;
  std::optional<SeriesValue> kernel;
};

// Noncentral: density proportional to |X|^{n/2-(m+1)/2} h(tr Sigma^{-1} X)
// 0F1(n/2; Psi Sigma^{-1} X / 4), with Psi symmetric positive semidefinite.
SeriesLogDensity ncwgd_logpdf(const WgdParams& p, const SymMatrix& psi, const SpdMatrix& x, const Truncation& trunc);
SeriesValue ncwgd_log_normalizer(const WgdParams& p, const SymMatrix& psi, const Truncation& trunc);

// Hypergeometric: density proportional to |X|^{n/2-(m+1)/2} h(tr Sigma^{-1} X)
// pFq(a; b; Omega X).
SeriesLogDensity hwgd_logpdf(const WgdParams& p, const std::vector<double>& a, const std::vector<double>& b,
                             const SymMatrix& omega, const SpdMatrix& x, const Truncation& trunc);
SeriesValue hwgd_log_normalizer(const WgdParams& p, const std::vector<double>& a, const std::vector<double>& b,
                                const SymMatrix& omega, const Truncation& trunc);
// The p = q = 0 case, etr(Omega X).
SeriesLogDensity exp_wgd_logpdf(const WgdParams& p, const SymMatrix& omega, const SpdMatrix& x,
                                const Truncation& trunc);

// Named members of the family with both the normalizing constant as computed
// here and the closed-form one quoted in the literature.
struct SpecialCase {
  std::string name;
  WgdParams params;
  double log_normalizer = 0.0;
  // NaN when the closed form is not a positive number.
  double printed_log_normalizer = 0.0;
  double relative_mismatch = 0.0;
  bool mismatch = false;
  std::string note;
};

SpecialCase matrix_t_case(const SpdMatrix& sigma, double n, double p);
SpecialCase power_wishart_case(const SpdMatrix& sigma, double n, double a, double b);
SpecialCase kummer_wishart_case(const SpdMatrix& sigma, double n, double a, double b);
SpecialCase logistic_wishart_case(const SpdMatrix& sigma, double n, double a, double b);
SpecialCase sin_wishart_case(const SpdMatrix& sigma, double n, double a, double b);
SpecialCase log_wishart_case(const SpdMatrix& sigma, double n);
SpecialCase hypergeometric_wishart_case(const SpdMatrix& sigma, double n, const std::vector<double>& a,
                                        const std::vector<double>& b, double c);
// Dispatch by name ("matrix_t", "power_wishart", "kummer_wishart",
// "logistic_wishart", "sin_wishart", "log_wishart",
// "hypergeometric_wishart") with parameters from JSON.
SpecialCase special_case(const std::string& name, const SpdMatrix& sigma, double n, const nlohmann::json& params);
std::vector<std::string> special_case_names();

// log density of the Wishart W_m(Sigma, n) and inverse Wishart IW(Psi, nu)
// (density proportional to |U|^{-nu/2-(m+1)/2} etr(-Psi U^{-1}/2)).
double wishart_logpdf(const SpdMatrix& sigma, double n, const SpdMatrix& x);
double inverse_wishart_logpdf(const SpdMatrix& psi, double nu, const SpdMatrix& u);

}  // namespace wgd
