#pragma once

#include "wgd/partitions_zonal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace wgd::detail {

// sum_kappa exp(base + log_weight(kappa)) C_kappa(eig) for |kappa| = k.
// The eigenvalues are rescaled by their largest magnitude first so that
// neither the polynomial values nor the weights overflow on their own.
template <class T, class W>
std::complex<double> weighted_zonal_layer(int k, std::span<const T> eig, double base, W&& log_weight) {
  const int m = static_cast<int>(eig.size());
  double scale = 0.0;
  for (const auto& e : eig) scale = std::max(scale, std::abs(e));
  if (k == 0) return std::exp(base + log_weight(Partition{}));
  if (scale == 0.0) return 0.0;
  std::vector<T> e(eig.begin(), eig.end());
  for (auto& x : e) x /= scale;
  const auto parts = partitions_of(k, m);
  const auto c = zonal_layer(k, std::span<const T>(e));
  const double shift = base + k * std::log(scale);
  std::complex<double> s = 0.0;
  for (size_t i = 0; i < parts.size(); ++i) s += std::exp(shift + log_weight(parts[i])) * std::complex<double>(c[i]);
  return s;
}

inline std::span<const double> span_of(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

}  // namespace wgd::detail
