#pragma once

#include "wgd/distributions.hpp"
#include "wgd/generators.hpp"
#include "wgd/matrix_core.hpp"

#include <boost/random/mersenne_twister.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace wgd {

// mt19937_64 seeded from (seed, stream) through splitmix64. Equal pairs give
// identical draws on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  static constexpr const char* algorithm = "mt19937_64/splitmix64";

  double uniform();  // (0, 1)
  double normal();
  double gamma(double shape, double scale = 1.0);
  double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  boost::random::mt19937_64 engine_;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

// One W_m(Sigma, n) draw by the Bartlett decomposition.
SpdMatrix sample_wishart(const SpdMatrix& sigma, double n, RngStream& rng);
// IW(Psi, nu) draw as the inverse of a W_m(Psi^{-1}, nu) draw.
SpdMatrix sample_inverse_wishart(const SpdMatrix& psi, double nu, RngStream& rng);
// U = V / tr V with V ~ W_m(I, n).
SpdMatrix sample_direction(double n, int m, RngStream& rng);

// Draws y with density proportional to y^{nm/2-1} h(y). Exponential, t_prime
// and power use closed forms; other generators use a tabulated inverse CDF
// in log y refined by Newton steps on the exact CDF.
class RadialSampler {
 public:
  RadialSampler(const ShapeGenerator& h, double n, int m);
  double operator()(RngStream& rng) const;
  bool tabulated() const { return table_ != nullptr; }
  // CDF of the radial law (tabulated generators only; closed-form kinds use
  // a quadrature of the density).
  double cdf(double y) const;

 private:
  struct Table;
  ShapeGenerator h_;
  double s_;
  std::shared_ptr<const Table> table_;
};

double sample_radial(const ShapeGenerator& h, double n, int m, RngStream& rng);

// Draws with the radial factor returned alongside: X = L (y U) L', L L' = Sigma.
struct WgdDraw {
  SpdMatrix x;
  double y;
};
class WgdSampler {
 public:
  explicit WgdSampler(const WgdParams& params);
  WgdDraw draw(RngStream& rng) const;
  const WgdParams& params() const { return params_; }

 private:
  WgdParams params_;
  RadialSampler radial_;
};

std::vector<SpdMatrix> sample_wgd(const WgdParams& params, int count, RngStream& rng);

// Mean and standard error of draw(rng) over n draws. Draws are split into
// chunks of 8192 with stream id equal to the chunk index, so the result
// depends only on (seed, n). Chunks may run in parallel; their partial sums
// are combined pairwise in a fixed order.
McEstimate mc_generic(const std::function<double(RngStream&)>& draw, long n, std::uint64_t seed);
McEstimate mc_estimate(const std::function<double(const SpdMatrix&)>& statistic, const WgdParams& params, long n,
                       std::uint64_t seed);

// Proposal for importance sampling: X = s W with W ~ W_m(Sigma, n) and
// s ~ InvGamma(shape, 1). Heavier tailed than every WGD whose generator
// decays faster than y^{-(nm/2+shape)}.
class WishartScaleMixture {
 public:
  WishartScaleMixture(SpdMatrix sigma, double n, double shape);
  SpdMatrix draw(RngStream& rng) const;
  double logpdf(const SpdMatrix& x) const;

 private:
  SpdMatrix sigma_;
  double n_;
  double shape_;
};

}  // namespace wgd
