#include "wgd/partitions_zonal.hpp"

#include "wgd/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace wgd {

namespace {

constexpr const char* kCacheVersion = "wgd-zonal-coefficients-1";

// C_kappa = sum_lambda coef[kappa][lambda] M_lambda over partitions of one
// weight with at most m parts; indices follow partitions_of order.
struct Layer {
  std::vector<Partition> parts;
  std::vector<std::vector<double>> coef;
};

double rho(const std::vector<int>& l) {
  double r = 0;
  for (size_t i = 0; i < l.size(); ++i) r += static_cast<double>(l[i]) * (l[i] - static_cast<double>(i + 1));
  return r;
}

std::unique_ptr<Layer> build_layer(int k, int m) {
  auto layer = std::make_unique<Layer>();
  layer->parts = partitions_of(k, m);
  const size_t np = layer->parts.size();
  std::map<std::vector<int>, size_t> index;
  std::vector<std::vector<int>> padded(np);
  for (size_t i = 0; i < np; ++i) {
    padded[i] = layer->parts[i].parts();
    padded[i].resize(m, 0);
    index[padded[i]] = i;
  }

  // Unnormalized rows (diagonal 1), lower partitions in dominance filled by
  // the eigen-operator recurrence.
  std::vector<std::vector<long double>> u(np, std::vector<long double>(np, 0.0L));
  for (size_t r = 0; r < np; ++r) {
    u[r][r] = 1.0L;
    const double rho_k = rho(padded[r]);
    for (size_t c = r + 1; c < np; ++c) {
      const std::vector<int>& l = padded[c];
      long double acc = 0.0L;
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
          for (int t = 1; t <= l[j]; ++t) {
            std::vector<int> mu = l;
            mu[i] += t;
            mu[j] -= t;
            std::sort(mu.begin(), mu.end(), std::greater<int>());
            auto it = index.find(mu);
            if (it == index.end()) continue;
            size_t q = it->second;
            if (q < r || q >= c) continue;
            acc += static_cast<long double>((l[i] + t) - (l[j] - t)) * u[r][q];
          }
        }
      }
      double denom = rho_k - rho(l);
      u[r][c] = denom == 0.0 ? 0.0L : acc / denom;
    }
  }

  // Row scaling so that the sum over kappa reproduces (tr Y)^k, whose
  // monomial coefficients are k!/prod(l_i!).
  std::vector<long double> d(np, 0.0L);
  for (size_t c = 0; c < np; ++c) {
    long double target = std::lgamma(k + 1.0L);
    for (int v : padded[c]) target -= std::lgamma(v + 1.0L);
    target = std::exp(target);
    long double acc = 0.0L;
    for (size_t r = 0; r < c; ++r) acc += d[r] * u[r][c];
    d[c] = target - acc;
  }
  layer->coef.assign(np, std::vector<double>(np, 0.0));
  for (size_t r = 0; r < np; ++r)
    for (size_t c = r; c < np; ++c) layer->coef[r][c] = static_cast<double>(d[r] * u[r][c]);
  return layer;
}

class ZonalCache {
 public:
  static ZonalCache& instance() {
    static ZonalCache cache;
    return cache;
  }

  const Layer& get(int k, int m) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& layers = tables_[m];
    if (k < static_cast<int>(layers.size()) && layers[k]) return *layers[k];
    if (k > limit_) {
      std::ostringstream os;
      os << "zonal coefficients of weight " << k << " exceed the table limit " << limit_;
      fail(ErrorKind::TruncationExceeded, os.str());
    }
    if (k >= static_cast<int>(layers.size())) layers.resize(k + 1);
    layers[k] = build_layer(k, m);
    return *layers[k];
  }

  void insert(int k, int m, std::unique_ptr<Layer> layer) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& layers = tables_[m];
    if (k >= static_cast<int>(layers.size())) layers.resize(k + 1);
    if (!layers[k]) layers[k] = std::move(layer);
  }

  void set_limit(int k) {
    std::lock_guard<std::mutex> lock(mu_);
    limit_ = k;
  }
  int limit() {
    std::lock_guard<std::mutex> lock(mu_);
    return limit_;
  }

 private:
  std::mutex mu_;
  std::map<int, std::vector<std::unique_ptr<Layer>>> tables_;
  int limit_ = 160;
};

// M_lambda(y): sum over distinct arrangements of the padded exponents.
template <class T>
T monomial(const std::vector<int>& lambda, const std::vector<std::vector<T>>& powers) {
  const size_t m = powers.size();
  std::vector<int> e(m, 0);
  for (size_t i = 0; i < lambda.size(); ++i) e[i] = lambda[i];
  std::sort(e.begin(), e.end());
  T sum = 0.0;
  do {
    T term = 1.0;
    for (size_t i = 0; i < m && term != T(0.0); ++i) term *= powers[i][e[i]];
    sum += term;
  } while (std::next_permutation(e.begin(), e.end()));
  return sum;
}

template <class T>
std::vector<std::vector<T>> power_table(std::span<const T> y, int k) {
  std::vector<std::vector<T>> p(y.size(), std::vector<T>(k + 1, T(1.0)));
  for (size_t i = 0; i < y.size(); ++i)
    for (int e = 1; e <= k; ++e) p[i][e] = p[i][e - 1] * y[i];
  return p;
}

template <class T>
std::vector<T> zonal_layer_impl(int k, std::span<const T> eigenvalues) {
  const int m = static_cast<int>(eigenvalues.size());
  if (m < 1) fail(ErrorKind::DimensionMismatch, "zonal polynomial needs at least one eigenvalue");
  if (k < 0) fail(ErrorKind::InvalidInput, "zonal weight must be non-negative");
  const Layer& layer = ZonalCache::instance().get(k, m);
  auto powers = power_table(eigenvalues, k);
  const size_t np = layer.parts.size();
  std::vector<T> mono(np);
  for (size_t c = 0; c < np; ++c) mono[c] = monomial(layer.parts[c].parts(), powers);
  std::vector<T> out(np, T(0.0));
  for (size_t r = 0; r < np; ++r) {
    T acc = 0.0;
    for (size_t c = r; c < np; ++c) acc += layer.coef[r][c] * mono[c];
    out[r] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> zonal_layer(int k, std::span<const double> eigenvalues) {
  return zonal_layer_impl(k, eigenvalues);
}

std::vector<std::complex<double>> zonal_layer(int k, std::span<const std::complex<double>> eigenvalues) {
  return zonal_layer_impl(k, eigenvalues);
}

double zonal(const Partition& kappa, std::span<const double> eigenvalues) {
  const int m = static_cast<int>(eigenvalues.size());
  if (kappa.length() > m) return 0.0;
  const Layer& layer = ZonalCache::instance().get(kappa.weight(), m);
  auto it = std::find(layer.parts.begin(), layer.parts.end(), kappa);
  size_t r = static_cast<size_t>(it - layer.parts.begin());
  auto powers = power_table(std::span<const double>(eigenvalues), kappa.weight());
  double acc = 0.0;
  for (size_t c = r; c < layer.parts.size(); ++c) {
    if (layer.coef[r][c] == 0.0) continue;
    acc += layer.coef[r][c] * monomial(layer.parts[c].parts(), powers);
  }
  return acc;
}

double zonal_matrix(const Partition& kappa, const SymMatrix& y) {
  Vector ev = y.eigenvalues();
  return zonal(kappa, std::span<const double>(ev.data(), static_cast<size_t>(ev.size())));
}

double zonal_identity(const Partition& kappa, int m) {
  std::vector<double> ones(m, 1.0);
  return zonal(kappa, ones);
}

void set_zonal_weight_limit(int max_weight) { ZonalCache::instance().set_limit(max_weight); }
int zonal_weight_limit() { return ZonalCache::instance().limit(); }

void save_zonal_cache(const std::string& path, int m, int k) {
  nlohmann::json layers = nlohmann::json::array();
  for (int w = 0; w <= k; ++w) {
    const Layer& layer = ZonalCache::instance().get(w, m);
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : layer.parts) parts.push_back(p.parts());
    layers.push_back({{"k", w}, {"partitions", parts}, {"coef", layer.coef}});
  }
  nlohmann::json doc = {{"version", kCacheVersion}, {"m", m}, {"layers", layers}};
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
  out << doc.dump() << '\n';
}

bool load_zonal_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  if (doc.value("version", std::string()) != kCacheVersion) return false;
  const int m = doc.at("m").get<int>();
  for (const auto& entry : doc.at("layers")) {
    const int w = entry.at("k").get<int>();
    auto layer = std::make_unique<Layer>();
    for (const auto& p : entry.at("partitions")) layer->parts.emplace_back(p.get<std::vector<int>>());
    layer->coef = entry.at("coef").get<std::vector<std::vector<double>>>();
    if (layer->parts != partitions_of(w, m) || layer->coef.size() != layer->parts.size())
      fail(ErrorKind::InvalidInput, path + ": inconsistent zonal table");
    ZonalCache::instance().insert(w, m, std::move(layer));
  }
  return true;
}

namespace {

template <class T>
SeriesValue hypergeom_impl(const std::vector<double>& a, const std::vector<double>& b, std::span<const T> eigenvalues,
                           const Truncation& trunc) {
  const int m = static_cast<int>(eigenvalues.size());
  const size_t p = a.size(), q = b.size();
  for (double bj : b)
    if (!(bj > 0.5 * (m - 1))) fail(ErrorKind::DomainError, "lower hypergeometric parameters must exceed (m-1)/2");
  double radius = 0.0;
  for (const T& v : eigenvalues) radius = std::max(radius, static_cast<double>(std::abs(v)));
  if (p > q + 1 && radius > 0) fail(ErrorKind::DomainError, "pFq with p > q + 1 diverges for non-zero argument");
  if (p == q + 1 && radius >= 1.0) fail(ErrorKind::DomainError, "pFq with p = q + 1 needs spectral radius < 1");

  double log_fact = 0.0;
  std::vector<T> ev(eigenvalues.begin(), eigenvalues.end());
  return sum_series(
      [&](int k) -> std::optional<std::complex<double>> {
        if (k > 0) log_fact += std::log(static_cast<double>(k));
        auto parts = partitions_of(k, m);
        auto c = zonal_layer(k, std::span<const T>(ev));
        std::complex<double> s = 0.0;
        for (size_t i = 0; i < parts.size(); ++i) {
          double coeff = 1.0;
          for (double ai : a) coeff *= gen_pochhammer(ai, parts[i]);
          for (double bj : b) coeff /= gen_pochhammer(bj, parts[i]);
          s += coeff * std::complex<double>(c[i]);
        }
        return s * std::exp(-log_fact);
      },
      trunc, SeriesShape::Plain, "hypergeometric series");
}

}  // namespace

SeriesValue hypergeom_matrix(const std::vector<double>& a, const std::vector<double>& b,
                             std::span<const double> eigenvalues, const Truncation& trunc) {
  return hypergeom_impl(a, b, eigenvalues, trunc);
}

SeriesValue hypergeom_matrix(const std::vector<double>& a, const std::vector<double>& b,
                             std::span<const std::complex<double>> eigenvalues, const Truncation& trunc) {
  return hypergeom_impl(a, b, eigenvalues, trunc);
}

SeriesValue hypergeom_matrix(const std::vector<double>& a, const std::vector<double>& b, const SymMatrix& y,
                             const Truncation& trunc) {
  Vector ev = y.eigenvalues();
  return hypergeom_matrix(a, b, std::span<const double>(ev.data(), static_cast<size_t>(ev.size())), trunc);
}

}  // namespace wgd
