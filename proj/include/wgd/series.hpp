#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>

namespace wgd {

enum class TailPolicy { Relative, Absolute };

struct Truncation {
  int max_degree = 30;
  double tolerance = 1e-10;
  TailPolicy policy = TailPolicy::Relative;

  // max_degree taken from WGD_TRUNC_K when set, otherwise 30.
  static Truncation from_env();
  Truncation with_degree(int k) const;
};

struct SeriesValue {
  std::complex<double> value{0.0, 0.0};
  int terms_used = 0;
  double last_layer_magnitude = 0.0;
  bool converged = false;
  // Set when a probability was pulled back into [0, 1].
  bool clamped = false;

  double real() const { return value.real(); }
};

enum class SeriesShape { Plain, Alternating };

// Layer k of a series. std::nullopt marks a layer that vanishes identically
// (e.g. a zero Taylor coefficient) and is skipped by the stopping rule.
using LayerFn = std::function<std::optional<std::complex<double>>(int k)>;

// Sums layers 0..K. Stops once three consecutive layers are within the tail
// tolerance; an alternating series additionally needs its last two layers
// to be shrinking. Throws DivergenceSuspected (AlternatingSeriesNotConverged
// for the alternating shape) when the layer magnitude grows three times in a
// row past K/2, and TruncationExceeded when K is reached otherwise.
SeriesValue sum_series(const LayerFn& layer, const Truncation& trunc, SeriesShape shape = SeriesShape::Plain,
                       const std::string& what = "series");

}  // namespace wgd
