#include "wgd/sampling.hpp"

#include "wgd/error.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace wgd {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t st = seed;
  std::uint64_t a = splitmix64(st);
  st = a ^ (stream * 0xD1B54A32D192ED03ULL);
  splitmix64(st);
  return splitmix64(st);
}

// Positive definite without a relative floor on the smallest eigenvalue.
const MatrixTolerance kSampleTol{-1.0, 0.0};

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix_seed(seed, stream)) {}

double RngStream::uniform() {
  boost::random::uniform_01<double> u;
  double v;
  do v = u(engine_);
  while (v <= 0.0);
  return v;
}

double RngStream::normal() {
  boost::random::normal_distribution<double> d;
  return d(engine_);
}

double RngStream::gamma(double shape, double scale) {
  boost::random::gamma_distribution<double> d(shape, scale);
  return d(engine_);
}

namespace {

Matrix bartlett_factor(int m, double n, RngStream& rng) {
  Matrix a = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = std::sqrt(rng.chi_square(n - i));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  return a;
}

void check_dof(double n, int m) {
  if (!(n > m - 1)) {
    std::ostringstream os;
    os << "degrees of freedom must exceed m - 1 = " << m - 1 << ", got " << n;
    fail(ErrorKind::ParameterOutOfRange, os.str());
  }
}

}  // namespace

SpdMatrix sample_wishart(const SpdMatrix& sigma, double n, RngStream& rng) {
  const int m = sigma.dim();
  check_dof(n, m);
  Matrix la = sigma.cholesky_lower() * bartlett_factor(m, n, rng);
  return SpdMatrix::from_entries(la * la.transpose(), kSampleTol);
}

SpdMatrix sample_inverse_wishart(const SpdMatrix& psi, double nu, RngStream& rng) {
  const SpdMatrix w = sample_wishart(psi.inverse_spd(), nu, rng);
  Matrix inv = w.inverse();
  return SpdMatrix::from_entries(0.5 * (inv + inv.transpose()), kSampleTol);
}

namespace {

Matrix direction_matrix(double n, int m, RngStream& rng) {
  Matrix a = bartlett_factor(m, n, rng);
  Matrix v = a * a.transpose();
  v = 0.5 * (v + v.transpose());
  return v / v.trace();
}

}  // namespace

SpdMatrix sample_direction(double n, int m, RngStream& rng) {
  check_dof(n, m);
  Matrix u = direction_matrix(n, m, rng);
  if (m == 1) u(0, 0) = 1.0;
  return SpdMatrix::from_entries(u, kSampleTol);
}

struct RadialSampler::Table {
  ShapeGenerator h;
  double s = 0.0;
  double gmax = 0.0;
  std::vector<double> u;
  std::vector<double> cum;  // normalized, cum.front() = 0, cum.back() = 1
  double total = 0.0;

  double g(double x) const {
    double lh = h.log_h(std::exp(x));
    if (!std::isfinite(lh)) return 0.0;
    return std::exp(s * x + lh - gmax);
  }
  double segment(double a, double b) const {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate([this](double x) { return g(x); }, a, b, 0);
  }
  // u with normalized CDF v.
  double invert(double v) const {
    size_t i = std::upper_bound(cum.begin(), cum.end(), v) - cum.begin();
    i = std::clamp<size_t>(i, 1, u.size() - 1) - 1;
    const double target = (v - cum[i]) * total;
    double a = u[i], b = u[i + 1];
    const double width = cum[i + 1] - cum[i];
    double x = width > 0 ? a + (b - a) * (v - cum[i]) / width : a;
    x = std::clamp(x, a, b);
    for (int it = 0; it < 60; ++it) {
      const double r = segment(u[i], x) - target;
      if (std::abs(r) <= 1e-13 * total) break;
      if (r > 0) b = x;
      else a = x;
      const double d = g(x);
      double nx = d > 0 ? x - r / d : 0.5 * (a + b);
      if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
      if (b - a < 1e-15 * std::max(1.0, std::abs(x))) break;
      x = nx;
    }
    return x;
  }
};

RadialSampler::RadialSampler(const ShapeGenerator& h, double n, int m) : h_(h), s_(0.5 * n * m) {
  check_dof(n, m);
  h_.log_mellin(s_);  // DivergentIntegral when the radial law does not exist
  switch (h_.kind()) {
    case GeneratorKind::Exponential:
    case GeneratorKind::TPrime:
    case GeneratorKind::Power:
      return;
    default:
      break;
  }
  auto t = std::make_shared<Table>(Table{h_, s_, 0.0, {}, {}, 0.0});
  const double ulo = h_.support_lo() > 0 ? std::log(h_.support_lo()) : -740.0;
  const double uhi = std::isfinite(h_.support_hi()) ? std::log(h_.support_hi()) : 705.0;
  const double step = 0.125;
  std::vector<double> xs, gs;
  for (double x = ulo; x <= uhi; x += step) {
    xs.push_back(x);
    const double lh = h_.log_h(std::exp(x));
    gs.push_back(std::isfinite(lh) ? s_ * x + lh : -std::numeric_limits<double>::infinity());
  }
  xs.push_back(uhi);
  {
    const double lh = h_.log_h(std::exp(uhi));
    gs.push_back(std::isfinite(lh) ? s_ * uhi + lh : -std::numeric_limits<double>::infinity());
  }
  const double gm = *std::max_element(gs.begin(), gs.end());
  if (!std::isfinite(gm)) fail(ErrorKind::NonpositiveDensity, h_.name() + " radial density vanishes everywhere");
  size_t first = 0, last = xs.size() - 1;
  while (first < xs.size() && !(gs[first] > gm - 48.0)) ++first;
  while (last > first && !(gs[last] > gm - 48.0)) --last;
  const double ua = first > 0 ? xs[first - 1] : xs[first];
  const double ub = last + 1 < xs.size() ? xs[last + 1] : xs[last];
  t->gmax = gm;
  const int knots = 2048;
  t->u.resize(knots + 1);
  t->cum.resize(knots + 1);
  for (int i = 0; i <= knots; ++i) t->u[i] = ua + (ub - ua) * i / knots;
  t->cum[0] = 0.0;
  for (int i = 0; i < knots; ++i) t->cum[i + 1] = t->cum[i] + t->segment(t->u[i], t->u[i + 1]);
  t->total = t->cum.back();
  if (!(t->total > 0)) fail(ErrorKind::NonpositiveDensity, h_.name() + " radial density has no mass");
  for (double& c : t->cum) c /= t->total;
  table_ = std::move(t);
}

double RadialSampler::operator()(RngStream& rng) const {
  switch (h_.kind()) {
    case GeneratorKind::Exponential:
      return rng.gamma(s_, 2.0);
    case GeneratorKind::TPrime: {
      const double g1 = rng.gamma(s_), g2 = rng.gamma(h_.c() - s_);
      return g1 / g2;
    }
    case GeneratorKind::Power:
      return std::pow(rng.gamma(s_ / h_.b()) / h_.a(), 1.0 / h_.b());
    default:
      return std::exp(table_->invert(rng.uniform()));
  }
}

double RadialSampler::cdf(double y) const {
  if (!(y > 0)) return 0.0;
  switch (h_.kind()) {
    case GeneratorKind::Exponential:
      return boost::math::gamma_p(s_, 0.5 * y);
    case GeneratorKind::TPrime:
      return boost::math::ibeta(s_, h_.c() - s_, y / (1.0 + y));
    case GeneratorKind::Power:
      return boost::math::gamma_p(s_ / h_.b(), h_.a() * std::pow(y, h_.b()));
    default: {
      const double x = std::log(y);
      const auto& t = *table_;
      if (x <= t.u.front()) return 0.0;
      if (x >= t.u.back()) return 1.0;
      size_t i = std::upper_bound(t.u.begin(), t.u.end(), x) - t.u.begin() - 1;
      return t.cum[i] + t.segment(t.u[i], x) / t.total;
    }
  }
}

double sample_radial(const ShapeGenerator& h, double n, int m, RngStream& rng) {
  return RadialSampler(h, n, m)(rng);
}

WgdSampler::WgdSampler(const WgdParams& params) : params_(params), radial_(params.h(), params.n(), params.dim()) {}

WgdDraw WgdSampler::draw(RngStream& rng) const {
  const int m = params_.dim();
  const double y = radial_(rng);
  Matrix u = m == 1 ? Matrix::Ones(1, 1) : direction_matrix(params_.n(), m, rng);
  const Matrix& l = params_.sigma().cholesky_lower();
  Matrix x = l * (y * u) * l.transpose();
  return {SpdMatrix::from_entries(0.5 * (x + x.transpose()), kSampleTol), y};
}

std::vector<SpdMatrix> sample_wgd(const WgdParams& params, int count, RngStream& rng) {
  if (count < 0) fail(ErrorKind::InvalidInput, "sample count must be nonnegative");
  WgdSampler sampler(params);
  std::vector<SpdMatrix> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sampler.draw(rng).x);
  return out;
}

namespace {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments combine(const Moments& a, const Moments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Moments r;
  r.n = a.n + b.n;
  const double d = b.mean - a.mean;
  r.mean = a.mean + d * b.n / r.n;
  r.m2 = a.m2 + b.m2 + d * d * a.n * b.n / r.n;
  return r;
}

Moments reduce(const std::vector<Moments>& v, size_t lo, size_t hi) {
  if (hi - lo == 1) return v[lo];
  const size_t mid = lo + (hi - lo) / 2;
  return combine(reduce(v, lo, mid), reduce(v, mid, hi));
}

constexpr long kChunk = 8192;

}  // namespace

McEstimate mc_generic(const std::function<double(RngStream&)>& draw, long n, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::InvalidInput, "Monte Carlo estimate needs at least 2 draws");
  const long chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  auto run = [&](long c) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    const long len = std::min(kChunk, n - c * kChunk);
    Moments acc;
    for (long i = 0; i < len; ++i) {
      const double x = draw(rng);
      acc.n += 1.0;
      const double d = x - acc.mean;
      acc.mean += d / acc.n;
      acc.m2 += d * (x - acc.mean);
    }
    parts[c] = acc;
  };
  const long workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || chunks == 1) {
    for (long c = 0; c < chunks; ++c) run(c);
  } else {
    for (long start = 0; start < chunks; start += workers) {
      std::vector<std::future<void>> fs;
      for (long c = start; c < std::min(chunks, start + workers); ++c) fs.push_back(std::async(std::launch::async, run, c));
      for (auto& f : fs) f.get();
    }
  }
  const Moments total = reduce(parts, 0, parts.size());
  McEstimate e;
  e.n_samples = n;
  e.mean = total.mean;
  e.std_error = std::sqrt(total.m2 / (total.n - 1.0) / total.n);
  return e;
}

McEstimate mc_estimate(const std::function<double(const SpdMatrix&)>& statistic, const WgdParams& params, long n,
                       std::uint64_t seed) {
  if (n < 100) fail(ErrorKind::InvalidInput, "Monte Carlo estimate needs N >= 100");
  WgdSampler sampler(params);
  return mc_generic([&](RngStream& rng) { return statistic(sampler.draw(rng).x); }, n, seed);
}

WishartScaleMixture::WishartScaleMixture(SpdMatrix sigma, double n, double shape)
    : sigma_(std::move(sigma)), n_(n), shape_(shape) {
  check_dof(n_, sigma_.dim());
  if (!(shape_ > 0)) fail(ErrorKind::ParameterOutOfRange, "mixture shape must be positive");
}

SpdMatrix WishartScaleMixture::draw(RngStream& rng) const {
  const double s = 1.0 / rng.gamma(shape_);
  const int m = sigma_.dim();
  Matrix la = sigma_.cholesky_lower() * bartlett_factor(m, n_, rng);
  return SpdMatrix::from_entries(s * (la * la.transpose()), kSampleTol);
}

double WishartScaleMixture::logpdf(const SpdMatrix& x) const {
  const int m = sigma_.dim();
  const double s = 0.5 * n_ * m;
  const double t = sigma_.trace_inverse_times(x.matrix());
  return -s * std::log(2.0) - mv_gamma_ln(0.5 * n_, m) - 0.5 * n_ * sigma_.log_det() +
         (0.5 * n_ - 0.5 * (m + 1)) * x.log_det() + boost::math::lgamma(s + shape_) -
         boost::math::lgamma(shape_) - (s + shape_) * std::log(0.5 * t + 1.0);
}

}  // namespace wgd
