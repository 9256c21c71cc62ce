#pragma once

#include "wgd/matrix_core.hpp"
#include "wgd/series.hpp"

#include <compare>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace wgd {

class Partition {
 public:
  Partition() = default;
  // Parts must be non-increasing and non-negative; trailing zeros are dropped.
  explicit Partition(std::vector<int> parts);
  static Partition parse(const std::string& text);  // "3,1,1"

  int weight() const { return weight_; }
  int length() const { return static_cast<int>(parts_.size()); }
  const std::vector<int>& parts() const { return parts_; }
  int operator[](int i) const { return i < length() ? parts_[i] : 0; }
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

// Partitions of k with at most max_parts parts, in reverse lexicographic
// order: (k), (k-1,1), (k-2,2), ...
std::vector<Partition> partitions_of(int k, int max_parts);

// (b)_kappa = prod_i prod_{j<k_i} (b - (i-1)/2 + j)
double gen_pochhammer(double b, const Partition& kappa);

// log Gamma_m(a, kappa) = log Gamma_m(a) + log (a)_kappa, via the product
// form. Needs a > (m-1)/2.
double gamma_m_partition_ln(double a, const Partition& kappa, int m);

// Zonal polynomials C_kappa, normalized so that sum_{|kappa|=k} C_kappa(Y)
// equals (tr Y)^k. Coefficient tables are built on demand per dimension and
// shared between threads.
std::vector<double> zonal_layer(int k, std::span<const double> eigenvalues);
// Same for a matrix with complex spectrum (e.g. a product of symmetric
// matrices); the values are real up to rounding when the spectrum is closed
// under conjugation.
std::vector<std::complex<double>> zonal_layer(int k, std::span<const std::complex<double>> eigenvalues);
double zonal(const Partition& kappa, std::span<const double> eigenvalues);
double zonal_matrix(const Partition& kappa, const SymMatrix& y);
double zonal_identity(const Partition& kappa, int m);

// Tables beyond this weight raise TruncationExceeded. Zero disables
// on-demand extension past what has already been built or loaded.
void set_zonal_weight_limit(int max_weight);
int zonal_weight_limit();

// Persists coefficient tables for dimension m up to weight k as JSON.
void save_zonal_cache(const std::string& path, int m, int k);
// Returns false (and leaves the cache untouched) if the file has a
// different format version.
bool load_zonal_cache(const std::string& path);

// pFq(a; b; Y) = sum_k sum_kappa [(a_1)_kappa...(a_p)_kappa] /
// [(b_1)_kappa...(b_q)_kappa] C_kappa(Y) / k!, summed over eigenvalues of Y.
SeriesValue hypergeom_matrix(const std::vector<double>& a, const std::vector<double>& b,
                             std::span<const double> eigenvalues, const Truncation& trunc);
SeriesValue hypergeom_matrix(const std::vector<double>& a, const std::vector<double>& b,
                             std::span<const std::complex<double>> eigenvalues, const Truncation& trunc);
SeriesValue hypergeom_matrix(const std::vector<double>& a, const std::vector<double>& b, const SymMatrix& y,
                             const Truncation& trunc);

}  // namespace wgd
